//! Verification suites. Each suite turns one family of identities into a
//! list of pass/fail cases.
//!
//! Every case draws from its own stream, derived from the base seed and a
//! fixed per-case tag, so a suite produces the same numbers whether it runs
//! alone or as part of `all`.

use std::fmt::Display;
use std::time::Instant;

use compcos_core::mc::Rng;
use compcos_core::{Comparison, Executor, McConfig, RngStream};

use crate::config::Config;
use crate::report::{Case, Meta, SuiteReport, MAX_SKIPPED_FRACTION};

pub mod algebra;
pub mod cosine;
pub mod measure;
pub mod radon;
pub mod zeta;

/// All suites, in the order `all` runs them.
pub const SUITES: [&str; 11] = [
    "cone",
    "gamma",
    "measure",
    "average",
    "eigen",
    "annihilate",
    "zeta",
    "functional",
    "hecke",
    "radon",
    "perp",
];

/// Suites with a sample budget.
pub const MONTE_CARLO_SUITES: [&str; 9] = [
    "measure",
    "average",
    "eigen",
    "annihilate",
    "zeta",
    "functional",
    "hecke",
    "radon",
    "perp",
];

#[derive(Debug, thiserror::Error)]
#[error("unknown suite `{0}`; expected one of {list} or all", list = SUITES.join(", "))]
pub struct UnknownSuite(pub String);

/// Settings shared by the cases of one suite run.
pub struct SuiteContext<'a> {
    pub seed: u64,
    pub samples: u64,
    pub partitions: usize,
    pub exec: &'a dyn Executor,
}

impl SuiteContext<'_> {
    /// Monte Carlo settings for the case tagged `tag`.
    pub fn mc(&self, tag: u64) -> McConfig {
        McConfig::new(self.seed, self.samples, self.partitions).derive(tag)
    }

    /// A generator for the random inputs (frames, points) of case `tag`.
    pub fn rng(&self, tag: u64) -> Rng {
        RngStream::new(self.seed, 0).derive(tag).rng()
    }
}

/// Collects cases. Estimates with too many skipped samples get an extra
/// failing case, and errors become failing cases instead of aborting the
/// suite.
#[derive(Debug, Default)]
pub struct Cases(Vec<Case>);

impl Cases {
    pub fn push(&mut self, c: Comparison) {
        if c.skipped_fraction > MAX_SKIPPED_FRACTION {
            self.0.push(
                Comparison::values(
                    format!("{}/skipped_fraction", c.name),
                    c.skipped_fraction.into(),
                    0.0.into(),
                    MAX_SKIPPED_FRACTION,
                )
                .into(),
            );
        }
        self.0.push(c.into());
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Comparison>) {
        cs.into_iter().for_each(|c| self.push(c));
    }

    /// Unwraps `r`, or records it as a failed case named `name`.
    pub fn check<T, E: Display>(&mut self, name: &str, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.push(Comparison::condition(format!("{name}/error: {e}"), false));
                None
            }
        }
    }

    pub fn into_vec(self) -> Vec<Case> {
        self.0
    }
}

/// Runs one named suite.
pub fn run_suite(name: &str, ctx: &SuiteContext) -> Result<Vec<Case>, UnknownSuite> {
    let mut cases = Cases::default();
    match name {
        "cone" => algebra::cone(ctx, &mut cases),
        "gamma" => algebra::gamma(ctx, &mut cases),
        "measure" => measure::measure(ctx, &mut cases),
        "average" => cosine::average(ctx, &mut cases),
        "eigen" => cosine::eigen(ctx, &mut cases),
        "annihilate" => cosine::annihilate(ctx, &mut cases),
        "perp" => cosine::perp(ctx, &mut cases),
        "zeta" => zeta::zeta(ctx, &mut cases),
        "functional" => zeta::functional(ctx, &mut cases),
        "hecke" => zeta::hecke(ctx, &mut cases),
        "radon" => radon::radon(ctx, &mut cases),
        _ => return Err(UnknownSuite(name.to_string())),
    }
    Ok(cases.into_vec())
}

/// Runs `selector` (a suite name or `all`) and assembles the report. Under
/// `all`, case names are prefixed with their suite.
pub fn run(selector: &str, config: &Config, exec: &dyn Executor) -> Result<SuiteReport, UnknownSuite> {
    let names: Vec<&str> = if selector == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&selector) {
        vec![selector]
    } else {
        return Err(UnknownSuite(selector.to_string()));
    };
    let start = Instant::now();
    let mut cases = Vec::new();
    for name in &names {
        let ctx = SuiteContext {
            seed: config.seed,
            samples: config.samples_for(name),
            partitions: config.partitions,
            exec,
        };
        let mut suite_cases = run_suite(name, &ctx)?;
        if names.len() > 1 {
            for c in &mut suite_cases {
                c.name = format!("{name}/{}", c.name);
            }
        }
        cases.extend(suite_cases);
    }
    let samples = match names.as_slice() {
        [one] => config.samples_for(one),
        _ => config.samples.unwrap_or(0),
    };
    Ok(SuiteReport {
        suite: selector.to_string(),
        cases,
        meta: Meta {
            seed: config.seed,
            samples,
            partitions: config.partitions,
            runtime_ms: start.elapsed().as_millis() as u64,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

/// Keeps the instance with the largest `residual / tolerance`.
pub(crate) fn worst(cs: impl IntoIterator<Item = Comparison>) -> Option<Comparison> {
    let ratio = |c: &Comparison| {
        if c.tolerance > 0.0 {
            c.residual / c.tolerance
        } else if c.residual == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    };
    cs.into_iter().fold(None, |best: Option<Comparison>, c| match best {
        Some(b) if !(ratio(&c) > ratio(&b)) => Some(b),
        _ => Some(c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use compcos_core::C64;

    #[test]
    fn worst_picks_largest_ratio_and_nan() {
        let a = Comparison::values("a", C64::new(1.0, 0.0), C64::new(1.1, 0.0), 1.0);
        let b = Comparison::values("b", C64::new(1.0, 0.0), C64::new(1.5, 0.0), 1.0);
        let c = Comparison::values("c", C64::new(f64::NAN, 0.0), C64::new(1.0, 0.0), 1.0);
        assert_eq!(worst([a.clone(), b.clone()]).unwrap().name, "b");
        assert_eq!(worst([a, c, b]).unwrap().name, "c");
    }

    #[test]
    fn skipped_samples_add_a_failing_case() {
        let mut cases = Cases::default();
        let mut c = Comparison::values("x", C64::new(1.0, 0.0), C64::new(1.0, 0.0), 0.0);
        c.skipped_fraction = 1e-3;
        cases.push(c);
        cases.check::<(), _>("y", Err("boom"));
        let v = cases.into_vec();
        assert_eq!(v.len(), 3);
        assert!(!v[0].pass && v[1].pass && !v[2].pass);
        assert!(v[2].name.contains("boom"));
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run("nope", &Config::default(), &compcos_core::Sequential).is_err());
    }
}
