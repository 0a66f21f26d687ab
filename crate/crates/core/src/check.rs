//! Pass/fail comparison of two sides of an identity.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::string::String;

use crate::mc::McEstimate;
use crate::C64;

/// Multiple of the combined standard error used as the Monte Carlo
/// tolerance.
pub const SIGMA_MULTIPLE: f64 = 3.0;

/// One checked identity. The residual is the larger of the real and
/// imaginary discrepancies, matching the per-component standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub name: String,
    pub lhs: C64,
    pub rhs: C64,
    pub stderr: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub skipped_fraction: f64,
}

impl Comparison {
    pub fn new(
        name: impl Into<String>,
        lhs: C64,
        rhs: C64,
        stderr: f64,
        tolerance: f64,
        skipped_fraction: f64,
    ) -> Self {
        let d = lhs - rhs;
        // `f64::max` drops NaN, so test it before combining.
        let residual = if d.re.is_nan() || d.im.is_nan() { f64::INFINITY } else { d.re.abs().max(d.im.abs()) };
        Comparison {
            name: name.into(),
            lhs,
            rhs,
            stderr,
            residual,
            tolerance,
            pass: residual <= tolerance,
            skipped_fraction,
        }
    }

    /// Two independent estimates; tolerance `3 sqrt(se_1^2 + se_2^2)`.
    pub fn estimates(name: impl Into<String>, lhs: &McEstimate, rhs: &McEstimate) -> Self {
        let se = lhs.stderr.hypot(rhs.stderr);
        Self::new(
            name,
            lhs.value,
            rhs.value,
            se,
            SIGMA_MULTIPLE * se,
            lhs.skipped_fraction().max(rhs.skipped_fraction()),
        )
    }

    /// An estimate against an exact value; tolerance `3 se`.
    pub fn estimate_vs_value(name: impl Into<String>, est: &McEstimate, value: C64) -> Self {
        Self::new(
            name,
            est.value,
            value,
            est.stderr,
            SIGMA_MULTIPLE * est.stderr,
            est.skipped_fraction(),
        )
    }

    /// Two exact values with an absolute tolerance.
    pub fn values(name: impl Into<String>, lhs: C64, rhs: C64, tolerance: f64) -> Self {
        Self::new(name, lhs, rhs, 0.0, tolerance, 0.0)
    }

    /// Two exact values with tolerance `rel * max(|lhs|, |rhs|)`.
    pub fn relative(name: impl Into<String>, lhs: C64, rhs: C64, rel: f64) -> Self {
        let scale = lhs.norm().max(rhs.norm());
        Self::values(name, lhs, rhs, rel * scale)
    }

    /// Re-evaluates a Monte Carlo comparison at `sigmas` standard errors
    /// instead of [`SIGMA_MULTIPLE`]. Exact comparisons are unchanged.
    pub fn holds_at(&self, sigmas: f64) -> bool {
        if self.stderr > 0.0 {
            self.residual <= self.tolerance * sigmas / SIGMA_MULTIPLE
        } else {
            self.pass
        }
    }

    /// A boolean condition recorded as a case (`1` expected, `1`/`0` observed).
    pub fn condition(name: impl Into<String>, holds: bool) -> Self {
        let v = if holds { 1.0 } else { 0.0 };
        Self::values(name, C64::new(v, 0.0), C64::new(1.0, 0.0), 0.0)
    }
}
