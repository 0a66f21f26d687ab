//! Flat `key = value` run configuration. The grammar is documented in
//! `config/default.conf`, which also supplies the built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;

use crate::suites::MONTE_CARLO_SUITES;

const DEFAULTS: &str = include_str!("../config/default.conf");

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    pub partitions: usize,
    /// Budget applied to every suite when set.
    pub samples: Option<u64>,
    suite_samples: BTreeMap<String, u64>,
}

impl Default for Config {
    fn default() -> Self {
        let mut c = Config {
            seed: 0,
            partitions: 1,
            samples: None,
            suite_samples: BTreeMap::new(),
        };
        c.merge_text(DEFAULTS, "default.conf")
            .expect("built-in configuration parses");
        c
    }
}

impl Config {
    /// Defaults overlaid with the file at `path`.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut c = Config::default();
        c.merge_text(&text, &path.display().to_string())?;
        Ok(c)
    }

    /// Applies every assignment in `text` on top of the current values.
    pub fn merge_text(&mut self, text: &str, source_name: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let err = |message: String| ConfigError::Parse {
                source_name: source_name.to_string(),
                line: i + 1,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let uint = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| err(format!("`{key}` needs an unsigned integer, found `{v}`")))
            };
            match key {
                "seed" => self.seed = uint(value)?,
                "partitions" => {
                    let p = uint(value)?;
                    if p == 0 {
                        return Err(err("`partitions` must be at least 1".into()));
                    }
                    self.partitions = p as usize;
                }
                "samples" => self.samples = Some(uint(value)?),
                _ => match key.strip_prefix("samples.") {
                    Some(suite) if MONTE_CARLO_SUITES.contains(&suite) => {
                        self.suite_samples.insert(suite.to_string(), uint(value)?);
                    }
                    Some(suite) => return Err(err(format!("no Monte Carlo suite named `{suite}`"))),
                    None => return Err(err(format!("unknown key `{key}`"))),
                },
            }
        }
        Ok(())
    }

    /// Sample budget for `suite`; zero for the exact suites.
    pub fn samples_for(&self, suite: &str) -> u64 {
        if !MONTE_CARLO_SUITES.contains(&suite) {
            return 0;
        }
        self.samples
            .or_else(|| self.suite_samples.get(suite).copied())
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_cover_every_monte_carlo_suite() {
        let c = Config::default();
        assert_eq!(c.seed, 42);
        for s in MONTE_CARLO_SUITES {
            assert!(c.samples_for(s) > 0, "{s}");
        }
        assert_eq!(c.samples_for("cone"), 0);
    }

    #[test]
    fn overlay_and_global_budget() {
        let mut c = Config::default();
        c.merge_text("seed = 7  # trailing comment\n\nsamples.average=10\n", "t").unwrap();
        assert_eq!((c.seed, c.samples_for("average")), (7, 10));
        assert_eq!(c.samples_for("zeta"), Config::default().samples_for("zeta"));
        c.merge_text("samples = 3", "t").unwrap();
        assert_eq!((c.samples_for("average"), c.samples_for("zeta")), (3, 3));
    }

    #[test]
    fn rejects_bad_lines() {
        let mut c = Config::default();
        for bad in ["seed 3", "seed = -1", "colour = red", "samples.nope = 3", "partitions = 0"] {
            let e = c.merge_text(bad, "x.conf").unwrap_err();
            assert!(e.to_string().starts_with("x.conf:1:"), "{e}");
        }
    }
}
