//! The `compcos` command line.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing case, 2 on bad
//! arguments, unreadable inputs or an index outside the convergence domain.

use std::fmt::Display;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use compcos_core::geometry::sample_stiefel;
use compcos_core::special::{injectivity_classify, multiplier_mu};
use compcos_core::transforms::{cosine_transform, AngleFunction, HPolynomial, One};
use compcos_core::{Matrix, McConfig, MultiIndex, RngStream, StiefelFrame, C64};
use serde_json::json;

use crate::config::Config;
use crate::exec::Rayon;
use crate::report::Complex;
use crate::suites;
use crate::table::FrameTable;

/// Draws for `transform` when no budget is given.
const TRANSFORM_SAMPLES: u64 = 100_000;
/// Stream tags for the sampled frame and the estimate of `transform`.
const FRAME_TAG: u64 = 0x7F;
const ESTIMATE_TAG: u64 = 0x80;

#[derive(Parser, Debug)]
#[command(name = "compcos", version, about = "Composite cosine transforms on Stiefel manifolds")]
pub struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Base seed of every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo draws, applied to every suite.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Number of independently seeded blocks per estimate.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    partitions: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Configuration file overlaid on the built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Evaluate transforms outside their convergence domain.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the multiplier μ_k(λ) as CSV.
    Mu {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Inclusive degree range `a..b`.
        #[arg(long, value_parser = parse_range)]
        k: RangeInclusive<u32>,
        /// A multi-index, comma separated; a single value means constant.
        /// Repeat for a grid.
        #[arg(long, required = true, allow_hyphen_values = true)]
        lambda: Vec<String>,
    },
    /// Decide injectivity of T^λ on G_{n,m}, printed as JSON.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        /// A suite name or `all`.
        #[arg(long)]
        suite: String,
    },
    /// Estimate (T^λ f)(u), printed as JSON.
    Transform {
        /// `one`, `hpoly:<k>` or `file:<path>`.
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// The frame, row-major and comma separated; sampled when absent.
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
    },
}

/// A failed command and its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn usage(e: impl Display) -> Failure {
    Failure { code: 2, message: e.to_string() }
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected `a..b`, found `{s}`"))?;
    let bound = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("bad bound `{x}`: {e}"));
    Ok(bound(a)?..=bound(b)?)
}

/// Parses `a,b,...` into a multi-index of length `m`. Components are real or
/// complex (`1.5-0.5i`); a single component is repeated.
pub fn parse_index(s: &str, m: usize) -> Result<MultiIndex, String> {
    let parts = s
        .split(',')
        .map(|p| C64::from_str(p.trim()).map_err(|_| format!("bad component `{}` in `{s}`", p.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    match parts.len() {
        1 => Ok(MultiIndex::constant(parts[0], m)),
        len if len == m => Ok(MultiIndex::new(parts)),
        len => Err(format!("`{s}` has {len} components, expected 1 or {m}")),
    }
}

fn check_dims(n: usize, m: usize) -> Result<(), Failure> {
    if m == 0 || m > n {
        return Err(usage(format!("need 1 <= m <= n, got n = {n}, m = {m}")));
    }
    Ok(())
}

fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        z.re.to_string()
    } else {
        z.to_string()
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("cannot write to stdout: {e}"))),
    }
}

impl Cli {
    fn config(&self) -> Result<Config, Failure> {
        let mut c = match &self.global.config {
            Some(path) => Config::load(path).map_err(usage)?,
            None => Config::default(),
        };
        if let Some(seed) = self.global.seed {
            c.seed = seed;
        }
        if let Some(samples) = self.global.samples {
            c.samples = Some(samples);
        }
        if let Some(p) = self.global.partitions {
            c.partitions = p as usize;
        }
        Ok(c)
    }

    pub fn run(&self) -> Result<(), Failure> {
        let config = self.config()?;
        let out = self.global.out.as_deref();
        match &self.command {
            Command::Mu { n, m, k, lambda } => {
                check_dims(*n, *m)?;
                if k.is_empty() {
                    return Err(usage(format!("empty degree range {}..{}", k.start(), k.end())));
                }
                let grid = lambda.iter().map(|s| parse_index(s, *m)).collect::<Result<Vec<_>, _>>().map_err(usage)?;
                emit(out, &mu_table(*n, *m, k.clone(), &grid).map_err(usage)?)
            }
            Command::Classify { n, m, lambda } => {
                check_dims(*n, *m)?;
                let lambda = parse_index(lambda, *m).map_err(usage)?;
                let v = injectivity_classify(&lambda, *n).map_err(usage)?;
                let report = json!({
                    "n": n,
                    "m": m,
                    "lambda": lambda.iter().map(|&z| Complex::from(z)).collect::<Vec<_>>(),
                    "status": v.status.as_str(),
                    "reason": v.reason.as_str(),
                    "injective": v.injective(),
                    "annihilated_above": v.annihilated_above,
                    "witness_available": v.witness_available,
                });
                emit(out, &(serde_json::to_string_pretty(&report).expect("serializes") + "\n"))
            }
            Command::Verify { suite } => {
                let report = suites::run(suite, &config, &Rayon).map_err(usage)?;
                emit(out, &report.to_json())?;
                let failures: Vec<_> = report.failures().collect();
                if failures.is_empty() {
                    return Ok(());
                }
                let mut message = format!("{} of {} cases failed:", failures.len(), report.cases.len());
                for c in failures {
                    message.push_str(&format!("\n  {} (residual {:e}, tolerance {:e})", c.name, c.residual, c.tolerance));
                }
                Err(Failure { code: 1, message })
            }
            Command::Transform { f, lambda, n, m, u } => {
                check_dims(*n, *m)?;
                let lambda = parse_index(lambda, *m).map_err(usage)?;
                let function = angle_function(f, *n, *m)?;
                let u = match u {
                    Some(s) => parse_frame(s, *n, *m).map_err(usage)?,
                    None => sample_stiefel(*n, *m, &mut RngStream::new(config.seed, 0).derive(FRAME_TAG).rng())
                        .map_err(usage)?,
                };
                let samples = config.samples.unwrap_or(TRANSFORM_SAMPLES);
                let mc = McConfig::new(config.seed, samples, config.partitions).derive(ESTIMATE_TAG);
                let est = cosine_transform(function.as_ref(), &lambda, &u, &mc, &Rayon, self.global.force)
                    .map_err(usage)?;
                let report = json!({
                    "value": Complex::from(est.value),
                    "stderr": est.stderr,
                    "samples": est.samples,
                    "skipped": est.skipped,
                    "diverges": est.diverges,
                    "u": u.matrix().as_slice(),
                });
                emit(out, &(serde_json::to_string_pretty(&report).expect("serializes") + "\n"))
            }
        }
    }
}

fn mu_table(n: usize, m: usize, k: RangeInclusive<u32>, grid: &[MultiIndex]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=m).map(|j| format!("lambda_{j}")).collect();
    header.extend(["k", "kind", "value_re", "value_im", "order"].map(String::from));
    w.write_record(&header)?;
    for lambda in grid {
        for k in k.clone() {
            let t = multiplier_mu(lambda, k, n);
            let (re, im) = match t.value() {
                Some(v) => (format!("{:?}", v.re), format!("{:?}", v.im)),
                None => (String::new(), String::new()),
            };
            let mut row: Vec<String> = lambda.iter().map(|&z| format_complex(z)).collect();
            row.extend([k.to_string(), t.kind().to_string(), re, im, t.order().to_string()]);
            w.write_record(&row)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn angle_function(spec: &str, n: usize, m: usize) -> Result<Box<dyn AngleFunction>, Failure> {
    if spec == "one" {
        return Ok(Box::new(One));
    }
    if let Some(k) = spec.strip_prefix("hpoly:") {
        let k = k.parse::<u32>().map_err(|e| usage(format!("bad degree in `{spec}`: {e}")))?;
        return Ok(Box::new(HPolynomial::new(n, m, k).map_err(usage)?));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        return Ok(Box::new(FrameTable::load(Path::new(path), n, m).map_err(|e| usage(format!("{path}: {e}")))?));
    }
    Err(usage(format!("unknown function `{spec}`; expected one, hpoly:<k> or file:<path>")))
}

fn parse_frame(s: &str, n: usize, m: usize) -> Result<StiefelFrame, String> {
    let entries = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad entry `{}`: {e}", p.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    if entries.len() != n * m {
        return Err(format!("--u needs {} entries, found {}", n * m, entries.len()));
    }
    let v = Matrix::from_row_major(n, m, entries).map_err(|e| e.to_string())?;
    StiefelFrame::new(v).map_err(|e| e.to_string())
}

/// Parses the process arguments and runs the command.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("compcos: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_parsing() {
        assert_eq!(parse_index("1.5", 3).unwrap(), MultiIndex::real(&[1.5, 1.5, 1.5]));
        let z = parse_index("1, -0.5+2i", 2).unwrap();
        assert_eq!(z[1], C64::new(-0.5, 2.0));
        assert!(parse_index("1,2,3", 2).is_err());
        assert!(parse_index("x", 2).is_err());
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0..6").unwrap(), 0..=6);
        assert!(parse_range("3..1").unwrap().is_empty());
        assert!(parse_range("3").is_err());
    }

    #[test]
    fn rank_one_table_marks_classical_zeros() {
        let csv = mu_table(3, 1, 0..=4, &[MultiIndex::real(&[0.0])]).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "lambda_1,k,kind,value_re,value_im,order");
        assert_eq!(rows.len(), 6);
        assert!(rows[1].starts_with("0,0,finite,"));
        for row in &rows[3..] {
            assert!(row.contains(",zero,"), "{row}");
        }
    }
}
