//! Log-gamma, gamma functions of the cone, Stiefel volumes, the multiplier
//! `μ_k(λ)` and the injectivity classifier.
//!
//! Every gamma product here is a finite product of scalar `Γ` factors. Each
//! factor's argument is classified as finite or as a pole at `-q` before any
//! floating-point evaluation, so ratios with cancelling poles return their
//! limit instead of `NaN`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};


use crate::cone::MultiIndex;
use crate::error::{dims, Error, Result};
use crate::C64;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Distance from a non-positive integer below which `log_gamma_complex`
/// reports a pole.
pub const POLE_TOLERANCE: f64 = 1e-14;

/// Tolerance for classifying a gamma argument as a pole in the tagged
/// products.
pub const INTEGER_TOLERANCE: f64 = 1e-12;

// B_{2k} / (2k (2k-1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// Principal branch of `log Γ(z)`.
///
/// Right half-plane: upward recurrence to `Re z >= 15`, then the Stirling
/// series. Left of `Re z = 1/2`: reflection with `log sin(πz)` written so that
/// it stays on the principal branch in the upper half-plane. Lower
/// half-plane: conjugate symmetry.
pub fn log_gamma_complex(z: C64) -> Result<C64> {
    if let Some(q) = pole_index(z, POLE_TOLERANCE) {
        return Err(Error::PoleAtNonPositiveInteger(-(q as i64)));
    }
    Ok(log_gamma_unchecked(z))
}

fn log_gamma_unchecked(z: C64) -> C64 {
    if z.im < 0.0 {
        return log_gamma_unchecked(z.conj()).conj();
    }
    if z.re < 0.5 {
        // log sin(πz) = -log 2 + iπ/2 - iπz + log(1 - e^{2πiz}) for Im z >= 0.
        let i = C64::new(0.0, 1.0);
        let w = (i * 2.0 * PI * z).exp();
        let log_sin = C64::new(-LN_2, PI / 2.0) - i * PI * z + (C64::new(1.0, 0.0) - w).ln();
        return C64::new(LN_PI, 0.0) - log_sin - log_gamma_unchecked(C64::new(1.0, 0.0) - z);
    }
    let mut shift = C64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = C64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift
}

/// `Γ(z)` for `z` off the poles.
pub fn gamma_complex(z: C64) -> Result<C64> {
    log_gamma_complex(z).map(|l| l.exp())
}

/// `Some(q)` when `z` lies within `tol` of the non-positive integer `-q`.
pub fn pole_index(z: C64, tol: f64) -> Option<u64> {
    let r = z.re.round();
    if r <= 0.0 && (z.re - r).abs() <= tol && z.im.abs() <= tol {
        Some((-r) as u64)
    } else {
        None
    }
}

/// Result of evaluating a meromorphic function at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TaggedValue {
    Finite(C64),
    Zero(u32),
    Pole(u32),
}

impl TaggedValue {
    pub fn kind(&self) -> &'static str {
        match self {
            TaggedValue::Finite(_) => "finite",
            TaggedValue::Zero(_) => "zero",
            TaggedValue::Pole(_) => "pole",
        }
    }

    /// Zero or pole order; 0 for finite values.
    pub fn order(&self) -> u32 {
        match *self {
            TaggedValue::Finite(_) => 0,
            TaggedValue::Zero(k) | TaggedValue::Pole(k) => k,
        }
    }

    /// The value with zeros mapped to 0; `None` at poles.
    pub fn value(&self) -> Option<C64> {
        match *self {
            TaggedValue::Finite(v) => Some(v),
            TaggedValue::Zero(_) => Some(C64::new(0.0, 0.0)),
            TaggedValue::Pole(_) => None,
        }
    }

    pub fn finite(&self) -> Option<C64> {
        match *self {
            TaggedValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TaggedValue::Zero(_))
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, TaggedValue::Pole(_))
    }
}

/// Ratio of scalar gamma products `exp(log_prefactor) ∏Γ(num) / ∏Γ(den)`.
///
/// Each argument carries `dz/dε` along the path used to resolve cancelling
/// poles: near `-q`, `Γ(z) ≈ (-1)^q / (q! (z + q))`, so a pole contributes
/// `(-1)^q / (q! dz/dε)` times `1/ε`.
fn gamma_ratio(
    log_prefactor: C64,
    num: &[(C64, f64)],
    den: &[(C64, f64)],
) -> TaggedValue {
    let mut log = log_prefactor;
    // Residue factors are carried as a sign plus a term in `log`.
    let mut residue_sign = 1.0;
    let mut net: i64 = 0;
    for (sign, factors) in [(1.0, num), (-1.0, den)] {
        for &(z, dir) in factors {
            match pole_index(z, INTEGER_TOLERANCE) {
                Some(q) => {
                    net += sign as i64;
                    // Residue (-1)^q / q! divided by dz/dε.
                    let parity = if q % 2 == 0 { 1.0 } else { -1.0 };
                    let value = parity / dir;
                    residue_sign *= value.signum();
                    log += sign * (value.abs().ln() - ln_factorial(q));
                }
                None => log += sign * log_gamma_unchecked(z),
            }
        }
    }
    match net {
        n if n > 0 => TaggedValue::Pole(n as u32),
        n if n < 0 => TaggedValue::Zero((-n) as u32),
        _ => TaggedValue::Finite(log.exp() * residue_sign),
    }
}

fn ln_factorial(q: u64) -> f64 {
    (1..=q).map(|i| (i as f64).ln()).sum()
}

fn gamma_product(log_prefactor: C64, args: &[C64]) -> TaggedValue {
    let num: Vec<(C64, f64)> = args.iter().map(|&z| (z, 1.0)).collect();
    gamma_ratio(log_prefactor, &num, &[])
}

/// `Γ_Ω(λ) = π^{m(m-1)/4} ∏_j Γ((λ_j - j + 1)/2)`, `j = 1..m`.
pub fn gamma_cone(lambda: &MultiIndex) -> TaggedValue {
    let m = lambda.len();
    let args: Vec<C64> = lambda
        .iter()
        .enumerate()
        .map(|(j, &l)| (l - j as f64) * 0.5)
        .collect();
    gamma_product(C64::new(cone_pi_exponent(m) * LN_PI, 0.0), &args)
}

/// `Γ_m(λ) = π^{m(m-1)/4} ∏_{j=0}^{m-1} Γ(λ - j/2)`.
pub fn siegel_gamma(lambda: C64, m: usize) -> TaggedValue {
    let args: Vec<C64> = (0..m).map(|j| lambda - j as f64 * 0.5).collect();
    gamma_product(C64::new(cone_pi_exponent(m) * LN_PI, 0.0), &args)
}

fn cone_pi_exponent(m: usize) -> f64 {
    (m * (m.max(1) - 1)) as f64 / 4.0
}

/// `|S^i| = 2 π^{(i+1)/2} / Γ((i+1)/2)`, the area of the unit `i`-sphere.
pub fn sphere_area(i: usize) -> f64 {
    let a = (i + 1) as f64 / 2.0;
    2.0 * (a * LN_PI - log_gamma_unchecked(C64::new(a, 0.0)).re).exp()
}

/// `σ_{n,m} = 2^m π^{nm/2} / Γ_m(n/2)`, the total mass of `V_{n,m}`.
pub fn stiefel_volume(n: usize, m: usize) -> Result<f64> {
    check_stiefel_dims(n, m)?;
    Ok(log_stiefel_volume(n, m).exp())
}

pub(crate) fn log_stiefel_volume(n: usize, m: usize) -> f64 {
    let log_gamma_m = cone_pi_exponent(m) * LN_PI
        + (0..m)
            .map(|j| log_gamma_unchecked(C64::new((n as f64 - j as f64) / 2.0, 0.0)).re)
            .sum::<f64>();
    m as f64 * LN_2 + (n * m) as f64 / 2.0 * LN_PI - log_gamma_m
}

/// `σ_{n,m}` as the product `∏_{i=1}^m |S^{n-i}|`.
pub fn stiefel_volume_by_spheres(n: usize, m: usize) -> Result<f64> {
    check_stiefel_dims(n, m)?;
    Ok((1..=m).map(|i| sphere_area(n - i)).product())
}

fn check_stiefel_dims(n: usize, m: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(dims(alloc::format!("V_{{n,m}} needs 1 <= m <= n (n = {n}, m = {m})")));
    }
    Ok(())
}

/// The multiplier
/// `μ_k(λ) = Γ_Ω(λ+m_0) Γ_Ω(k_0-λ_*) / (Γ_Ω(-λ_*) Γ_Ω(λ+k_0+n_0))`.
///
/// The π powers of the four cone gammas cancel, leaving `4m` scalar gamma
/// factors. Poles that cancel are resolved along the uniform path
/// `λ + ε(1, ..., 1)`, `ε → 0`.
pub fn multiplier_mu(lambda: &MultiIndex, k: u32, n: usize) -> TaggedValue {
    let m = lambda.len();
    let (kf, nf, mf) = (k as f64, n as f64, m as f64);
    let mut num = Vec::with_capacity(2 * m);
    let mut den = Vec::with_capacity(2 * m);
    for j in 1..=m {
        let jf = j as f64;
        let lj = lambda[j - 1];
        let lrev = lambda[m - j];
        num.push(((lj + mf - jf + 1.0) * 0.5, 0.5));
        num.push(((kf - lrev - jf + 1.0) * 0.5, -0.5));
        den.push(((-lrev - jf + 1.0) * 0.5, -0.5));
        den.push(((lj + kf + nf - jf + 1.0) * 0.5, 0.5));
    }
    gamma_ratio(C64::new(0.0, 0.0), &num, &den)
}

/// `c = π^{m(n-m)/2} i^{km} σ_{m,m}`, the constant in front of the multiplier.
pub fn multiplier_constant(n: usize, m: usize, k: u32) -> C64 {
    let modulus = ((m * (n - m)) as f64 / 2.0 * LN_PI + log_stiefel_volume(m, m)).exp();
    i_pow(k as u64 * m as u64) * modulus
}

/// `i^p`.
pub fn i_pow(p: u64) -> C64 {
    match p % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// `∫_{V_{n,m}} (u'v v'u)^λ dv = 2^m π^{nm/2} / Γ_m(m/2) · Γ_Ω(λ+m_0) / Γ_Ω(λ+n_0)`.
pub fn average_closed_form(lambda: &MultiIndex, n: usize) -> TaggedValue {
    let m = lambda.len();
    let (mf, nf) = (m as f64, n as f64);
    let log_pref = mf * LN_2 + nf * mf / 2.0 * LN_PI
        - (0..m)
            .map(|j| log_gamma_unchecked(C64::new((mf - j as f64) / 2.0, 0.0)).re)
            .sum::<f64>();
    // The π^{m(m-1)/4} factors of the three cone/Siegel gammas leave one
    // copy in the denominator.
    let log_pref = log_pref - cone_pi_exponent(m) * LN_PI;
    let num: Vec<(C64, f64)> = lambda
        .iter()
        .enumerate()
        .map(|(j, &l)| ((l + mf - j as f64) * 0.5, 0.5))
        .collect();
    let den: Vec<(C64, f64)> = lambda
        .iter()
        .enumerate()
        .map(|(j, &l)| ((l + nf - j as f64) * 0.5, 0.5))
        .collect();
    gamma_ratio(C64::new(log_pref, 0.0), &num, &den)
}

/// `λ ∈ 𝔏`: `Re λ_j > j - m - 1` for every `j`.
pub fn in_l_set(lambda: &MultiIndex) -> bool {
    let m = lambda.len() as f64;
    lambda
        .iter()
        .enumerate()
        .all(|(j, l)| l.re > (j + 1) as f64 - m - 1.0)
}

/// `λ ∈ Λ`: `Re λ_j > j - n - 1` for every `j`.
pub fn in_lambda_set(lambda: &MultiIndex, n: usize) -> bool {
    lambda
        .iter()
        .enumerate()
        .all(|(j, l)| l.re > (j + 1) as f64 - n as f64 - 1.0)
}

/// `λ ∈ Λ_0`: `λ_j = j - n - l` for some `j` and some odd `l >= 1`.
pub fn in_polar_set(lambda: &MultiIndex, n: usize) -> bool {
    lambda.iter().enumerate().any(|(j, lj)| {
        let l = (j + 1) as f64 - n as f64 - lj.re;
        let r = l.round();
        lj.im.abs() <= INTEGER_TOLERANCE
            && (l - r).abs() <= INTEGER_TOLERANCE
            && r >= 1.0
            && (r as i64) % 2 == 1
    })
}

/// Condition for injectivity in the general case: `λ_j + m - j ∉ {0, 2, 4, ...}`.
pub fn uhh_holds(lambda: &MultiIndex) -> bool {
    let m = lambda.len();
    lambda
        .iter()
        .enumerate()
        .all(|(j, &l)| !is_even_nonneg(l + (m - j - 1) as f64))
}

fn is_even_nonneg(z: C64) -> bool {
    let r = z.re.round();
    z.im.abs() <= INTEGER_TOLERANCE
        && (z.re - r).abs() <= INTEGER_TOLERANCE
        && r >= 0.0
        && (r as i64) % 2 == 0
}

fn is_nonneg_integer(z: C64) -> bool {
    let r = z.re.round();
    z.im.abs() <= INTEGER_TOLERANCE && (z.re - r).abs() <= INTEGER_TOLERANCE && r >= 0.0
}

/// Outcome of the injectivity classifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Injectivity {
    Injective,
    NonInjective,
    /// The general criterion fails but `2m > n`, where necessity is unknown.
    Undetermined,
    /// `λ ∉ 𝔏`: the transform is not an absolutely convergent operator.
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictReason {
    StrictlyInsideL,
    ViolatesUhh,
    RankOneRule,
    RankGtOneRule,
    OutsideConvergence,
}

impl VerdictReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictReason::StrictlyInsideL => "strictly_inside_L",
            VerdictReason::ViolatesUhh => "violates_uhh",
            VerdictReason::RankOneRule => "rank_one_rule",
            VerdictReason::RankGtOneRule => "rank_gt_one_rule",
            VerdictReason::OutsideConvergence => "outside_convergence",
        }
    }
}

impl Injectivity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Injectivity::Injective => "injective",
            Injectivity::NonInjective => "non_injective",
            Injectivity::Undetermined => "undetermined",
            Injectivity::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InjectivityVerdict {
    pub status: Injectivity,
    pub reason: VerdictReason,
    /// When the general criterion fails: H-polynomials of every degree
    /// `k > annihilated_above` lie in the kernel.
    pub annihilated_above: Option<f64>,
    /// Whether an explicit kernel witness exists (`2m <= n`).
    pub witness_available: bool,
}

impl InjectivityVerdict {
    /// `Some(true/false)` when the classifier is decisive.
    pub fn injective(&self) -> Option<bool> {
        match self.status {
            Injectivity::Injective => Some(true),
            Injectivity::NonInjective => Some(false),
            _ => None,
        }
    }
}

/// Grassmannian rank `min(m, n - m)`.
pub fn grassmann_rank(n: usize, m: usize) -> usize {
    m.min(n - m)
}

pub fn injectivity_classify(lambda: &MultiIndex, n: usize) -> Result<InjectivityVerdict> {
    let m = lambda.len();
    if m == 0 || n <= m {
        return Err(dims(alloc::format!("classifier needs n > m >= 1 (n = {n}, m = {m})")));
    }
    let witness_available = 2 * m <= n;
    let threshold = lambda
        .iter()
        .enumerate()
        .map(|(j, l)| l.re + (m - j - 1) as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let annihilated = if uhh_holds(lambda) { None } else { Some(threshold) };
    if !in_l_set(lambda) {
        return Ok(InjectivityVerdict {
            status: Injectivity::NotApplicable,
            reason: VerdictReason::OutsideConvergence,
            annihilated_above: None,
            witness_available,
        });
    }
    if lambda.is_constant(INTEGER_TOLERANCE) {
        let l = lambda[0];
        let (bad, reason) = if grassmann_rank(n, m) == 1 {
            (is_even_nonneg(l), VerdictReason::RankOneRule)
        } else {
            (is_nonneg_integer(l), VerdictReason::RankGtOneRule)
        };
        return Ok(InjectivityVerdict {
            status: if bad { Injectivity::NonInjective } else { Injectivity::Injective },
            reason,
            annihilated_above: if bad { annihilated } else { None },
            witness_available,
        });
    }
    let verdict = match annihilated {
        None => InjectivityVerdict {
            status: Injectivity::Injective,
            reason: VerdictReason::StrictlyInsideL,
            annihilated_above: None,
            witness_available,
        },
        Some(_) => InjectivityVerdict {
            status: if witness_available {
                Injectivity::NonInjective
            } else {
                Injectivity::Undetermined
            },
            reason: VerdictReason::ViolatesUhh,
            annihilated_above: annihilated,
            witness_available,
        },
    };
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::vec;

    // Γ(z) = ∫_R exp(z s - e^s) ds (t = e^s in Euler's integral), by composite
    // Gauss-Legendre on [-80, 6] with 160 panels of 16 nodes.
    fn gamma_oracle(z: C64) -> C64 {
        let (nodes, weights) = crate::quadrature::gauss_legendre(16);
        let (a, b, panels) = (-80.0, 6.0, 160);
        let h = (b - a) / panels as f64;
        let mut sum = C64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (x, w) in nodes.iter().zip(&weights) {
                let s = mid + 0.5 * h * x;
                sum += (z * s - s.exp()).exp() * (w * 0.5 * h);
            }
        }
        sum
    }

    fn close(a: C64, b: C64, rel: f64) -> bool {
        (a - b).norm() <= rel * a.norm().max(b.norm())
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma_complex(C64::new(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma_complex(C64::new(0.5, 0.0)).unwrap();
        assert!((half - C64::new(0.5 * LN_PI, 0.0)).norm() < 1e-14);
        let z = C64::new(3.7, 2.1);
        let g = gamma_complex(z).unwrap();
        assert!(close(g, gamma_oracle(z), 1e-12), "{g} vs {}", gamma_oracle(z));
    }

    #[test]
    fn log_gamma_matches_integral_oracle() {
        for &(re, im) in &[(0.6, 0.0), (1.3, -0.7), (2.5, 4.0), (7.2, 0.3), (0.9, 3.0), (12.0, -3.0)] {
            let z = C64::new(re, im);
            assert!(close(gamma_complex(z).unwrap(), gamma_oracle(z), 1e-12), "z = {z}");
        }
    }

    #[test]
    fn reflection_region() {
        // Γ(z)Γ(1-z) = π / sin(πz), and Γ(z+1) = zΓ(z) across Re z = 1/2.
        for &(re, im) in &[(-2.3, 0.4), (-0.5, 0.0), (0.2, -1.5), (-7.6, 2.2), (0.45, 0.01)] {
            let z = C64::new(re, im);
            let lhs = gamma_complex(z).unwrap() * gamma_complex(C64::new(1.0, 0.0) - z).unwrap();
            let rhs = C64::new(PI, 0.0) / (z * PI).sin();
            assert!(close(lhs, rhs, 1e-12), "z = {z}");
            let up = gamma_complex(z + 1.0).unwrap();
            assert!(close(up, z * gamma_complex(z).unwrap(), 1e-12), "z = {z}");
        }
    }

    #[test]
    fn principal_branch_is_continuous() {
        // Imaginary part of the principal branch varies continuously along a
        // path crossing Re z = 1/2 in the upper half-plane.
        let mut prev = log_gamma_complex(C64::new(-3.3, 0.5)).unwrap();
        for i in 1..=2000 {
            let z = C64::new(-3.3 + 7.0 * i as f64 / 2000.0, 0.5);
            let cur = log_gamma_complex(z).unwrap();
            assert!((cur - prev).norm() < 0.1, "jump at {z}");
            prev = cur;
        }
        let real_neg = log_gamma_complex(C64::new(-2.5, 0.0)).unwrap();
        assert!((real_neg.re.exp() - (gamma_oracle(C64::new(0.5, 0.0)).re / (-2.5 * -1.5 * -0.5)).abs()).abs() < 1e-12);
    }

    #[test]
    fn poles_are_errors() {
        assert_eq!(log_gamma_complex(C64::new(0.0, 0.0)), Err(Error::PoleAtNonPositiveInteger(0)));
        assert_eq!(log_gamma_complex(C64::new(-3.0, 1e-16)), Err(Error::PoleAtNonPositiveInteger(-3)));
        assert!(log_gamma_complex(C64::new(-3.0 + 1e-10, 0.0)).is_ok());
    }

    #[test]
    fn gamma_cone_examples() {
        assert_eq!(gamma_cone(&MultiIndex::real(&[2.0])), TaggedValue::Finite(C64::new(1.0, 0.0)));
        let v = gamma_cone(&MultiIndex::real(&[1.0, 2.0])).finite().unwrap();
        assert!(close(v, C64::new(PI.powf(1.5), 0.0), 1e-14));
        assert_eq!(gamma_cone(&MultiIndex::real(&[0.0, 1.0])), TaggedValue::Pole(2));
        assert_eq!(gamma_cone(&MultiIndex::real(&[3.0, 1.0])), TaggedValue::Pole(1));
    }

    #[test]
    fn siegel_examples() {
        let v = siegel_gamma(C64::new(1.0, 0.0), 1).finite().unwrap();
        assert!(close(v, C64::new(1.0, 0.0), 1e-15));
        let v = siegel_gamma(C64::new(1.5, 0.0), 2).finite().unwrap();
        assert!(close(v, C64::new(PI / 2.0, 0.0), 1e-14));
    }

    #[test]
    fn stiefel_volume_examples() {
        assert!((stiefel_volume(3, 1).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert!((stiefel_volume(2, 2).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert!(stiefel_volume(2, 3).is_err());
        for n in 1..=10 {
            for m in 1..=n {
                let a = stiefel_volume(n, m).unwrap();
                let b = stiefel_volume_by_spheres(n, m).unwrap();
                assert!((a - b).abs() <= 1e-12 * a, "n = {n}, m = {m}");
            }
        }
    }

    fn rank_one_mu(l: f64, k: u32, n: usize) -> TaggedValue {
        let (kf, nf) = (k as f64, n as f64);
        gamma_ratio(
            C64::new(0.0, 0.0),
            &[(C64::new((l + 1.0) / 2.0, 0.0), 0.5), (C64::new((kf - l) / 2.0, 0.0), -0.5)],
            &[(C64::new(-l / 2.0, 0.0), -0.5), (C64::new((l + kf + nf) / 2.0, 0.0), 0.5)],
        )
    }

    #[test]
    fn multiplier_rank_one_examples() {
        assert_eq!(multiplier_mu(&MultiIndex::real(&[0.0]), 2, 3), TaggedValue::Zero(1));
        // Funk-Hecke: T^1 on degree-2 harmonics of S^2 has eigenvalue -π/2... times c.
        let mu = multiplier_mu(&MultiIndex::real(&[1.0]), 2, 3).finite().unwrap();
        let c = multiplier_constant(3, 1, 2);
        assert!(close(c * mu, C64::new(PI / 2.0, 0.0), 1e-13), "{}", c * mu);
    }

    #[test]
    fn multiplier_matches_rank_one_formula_on_grid() {
        for li in 0..20 {
            let l = -0.95 + 0.25 * li as f64;
            for k in 0..5u32 {
                for n in [2usize, 3, 5] {
                    let a = multiplier_mu(&MultiIndex::real(&[l]), k, n);
                    let b = rank_one_mu(l, k, n);
                    match (a, b) {
                        (TaggedValue::Finite(x), TaggedValue::Finite(y)) => assert!(close(x, y, 1e-12)),
                        _ => assert_eq!(a, b),
                    }
                }
            }
        }
        // Integer λ lands on cancelling poles.
        for l in 0..6 {
            for k in 0..5u32 {
                let a = multiplier_mu(&MultiIndex::real(&[l as f64]), k, 3);
                let b = rank_one_mu(l as f64, k, 3);
                assert_eq!(a.kind(), b.kind(), "λ = {l}, k = {k}");
            }
        }
    }

    #[test]
    fn cancelled_poles_match_nearby_values() {
        // λ = 1, k = 3 at m = 1: Γ((k-λ)/2) finite, Γ(-λ/2) finite... use λ = 2,
        // k = 4: numerator Γ((k-λ)/2) = Γ(1), denominator Γ(-1) pole -> zero.
        // A genuine cancellation: m = 2, λ = (2, 1), k = 2, n = 4.
        let lam = MultiIndex::real(&[2.0, 1.0]);
        let exact = multiplier_mu(&lam, 2, 4);
        for eps in [1e-6, -1e-6] {
            let near = multiplier_mu(&lam.shift_real(eps), 2, 4);
            if let (TaggedValue::Finite(a), TaggedValue::Finite(b)) = (exact, near) {
                assert!(close(a, b, 1e-4), "{a} vs {b}");
            } else {
                assert_eq!(exact.kind(), near.kind());
            }
        }
    }

    #[test]
    fn multiplier_higher_rank_examples() {
        // (n, m, k) = (4, 2, 2), λ = (1, 1): Γ(0) in the numerator cancels
        // Γ(-1) in the denominator. Hand value of the limit: 1/15.
        let lam = MultiIndex::real(&[1.0, 1.0]);
        let mu = multiplier_mu(&lam, 2, 4).finite().expect("finite");
        assert!(close(mu, C64::new(1.0 / 15.0, 0.0), 1e-13), "{mu}");
        // Direct evaluation slightly off the cancelling poles.
        let g = |x: f64| gamma_complex(C64::new(x, 0.0)).unwrap();
        let e = 1e-7;
        let near = g(1.5 + e / 2.0) * g(1.0 + e / 2.0) * g(0.5 - e / 2.0) * g(-e / 2.0)
            / (g(-0.5 - e / 2.0) * g(-1.0 - e / 2.0) * g(3.5 + e / 2.0) * g(3.0 + e / 2.0));
        assert!(close(mu, near, 1e-6));
        // Away from every pole the tagged path is a plain product.
        let lam = MultiIndex::real(&[1.3, 0.4]);
        let mu = multiplier_mu(&lam, 2, 5).finite().unwrap();
        let direct = g((1.3 + 2.0) / 2.0) * g((0.4 + 1.0) / 2.0) * g((2.0 - 0.4) / 2.0) * g((2.0 - 1.3 - 1.0) / 2.0)
            / (g(-0.4 / 2.0) * g((-1.3 - 1.0) / 2.0) * g((1.3 + 7.0) / 2.0) * g((0.4 + 6.0) / 2.0));
        assert!(close(mu, direct, 1e-12));
    }

    #[test]
    fn multiplier_zero_examples() {
        assert_eq!(multiplier_mu(&MultiIndex::real(&[1.0, 0.0]), 2, 4), TaggedValue::Zero(1));
        assert_eq!(multiplier_mu(&MultiIndex::real(&[1.0, 1.0]), 4, 4), TaggedValue::Zero(1));
    }

    #[test]
    fn rank_one_constant_reduction() {
        for n in 2..=8 {
            for k in [0u32, 2, 4] {
                let c = multiplier_constant(n, 1, k);
                let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                let expected = 2.0 * PI.powf((n as f64 - 1.0) / 2.0) * sign;
                assert!(close(c, C64::new(expected, 0.0), 1e-13));
            }
        }
    }

    #[test]
    fn constant_index_multiplier_matches_siegel_form() {
        for &(n, m) in &[(4usize, 2usize), (5, 2), (6, 3)] {
            for li in 0..12 {
                let l = -0.9 + 0.37 * li as f64;
                for k in [0u32, 2, 4] {
                    let lam = MultiIndex::constant_real(l, m);
                    let mu = multiplier_mu(&lam, k, n);
                    let c = |x: f64| siegel_gamma(C64::new(x, 0.0), m);
                    let parts = [c((l + m as f64) / 2.0), c((k as f64 - l) / 2.0), c(-l / 2.0), c((l + k as f64 + n as f64) / 2.0)];
                    if let (TaggedValue::Finite(v), [TaggedValue::Finite(a), TaggedValue::Finite(b), TaggedValue::Finite(d), TaggedValue::Finite(e)]) = (mu, parts) {
                        assert!(close(v, a * b / (d * e), 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn average_closed_form_at_zero_is_volume() {
        for &(n, m) in &[(3usize, 1usize), (4, 2), (5, 2), (6, 3)] {
            let v = average_closed_form(&MultiIndex::zeros(m), n).finite().unwrap();
            assert!((v.re - stiefel_volume(n, m).unwrap()).abs() < 1e-12 * v.re);
        }
    }

    #[test]
    fn average_closed_form_equals_c_mu0() {
        for &(n, m) in &[(4usize, 2usize), (5, 2), (3, 1)] {
            for lam in [MultiIndex::constant_real(1.0, m), MultiIndex::real(&vec![0.5; m])] {
                let a = average_closed_form(&lam, n).finite().unwrap();
                let b = multiplier_constant(n, m, 0) * multiplier_mu(&lam, 0, n).finite().unwrap();
                assert!(close(a, b, 1e-10));
            }
        }
    }

    #[test]
    fn set_membership_examples() {
        assert!(in_l_set(&MultiIndex::real(&[0.0, 0.0])));
        assert!(!in_l_set(&MultiIndex::real(&[-2.5, 0.0])));
        for m in 1..=5 {
            assert!(in_l_set(&MultiIndex::constant_real(-0.99, m)));
        }
        assert!(in_lambda_set(&MultiIndex::real(&[-2.9]), 3) && !in_lambda_set(&MultiIndex::real(&[-3.0]), 3));
        assert!(!in_polar_set(&MultiIndex::real(&[-4.0]), 3));
        for l in [-3.0, -5.0, -7.0] {
            assert!(in_polar_set(&MultiIndex::real(&[l]), 3));
        }
        let far = MultiIndex::constant_real(10.0, 3);
        assert!(in_lambda_set(&far, 5) && !in_polar_set(&far, 5));
    }

    #[test]
    fn classifier_examples() {
        let v = injectivity_classify(&MultiIndex::real(&[2.0]), 3).unwrap();
        assert_eq!(v.injective(), Some(false));
        let v = injectivity_classify(&MultiIndex::real(&[1.0, 1.0]), 4).unwrap();
        assert_eq!((v.injective(), v.reason), (Some(false), VerdictReason::RankGtOneRule));
        let v = injectivity_classify(&MultiIndex::real(&[0.5, 0.5]), 5).unwrap();
        assert_eq!(v.injective(), Some(true));
        let v = injectivity_classify(&MultiIndex::real(&[1.0]), 3).unwrap();
        assert_eq!((v.injective(), v.reason), (Some(true), VerdictReason::RankOneRule));
        let v = injectivity_classify(&MultiIndex::real(&[-3.0, -3.0]), 4).unwrap();
        assert_eq!(v.status, Injectivity::NotApplicable);
        let v = injectivity_classify(&MultiIndex::real(&[1.0, 0.0]), 4).unwrap();
        assert_eq!((v.status, v.annihilated_above), (Injectivity::NonInjective, Some(2.0)));
        let v = injectivity_classify(&MultiIndex::real(&[1.0, 0.0]), 3).unwrap();
        assert_eq!((v.status, v.witness_available), (Injectivity::Undetermined, false));
        assert!(injectivity_classify(&MultiIndex::real(&[1.0, 0.0]), 2).is_err());
        let v = injectivity_classify(&MultiIndex::real(&[2.0, 0.5, 0.0]), 5).unwrap();
        assert_eq!(v.status, Injectivity::Undetermined);
    }

    #[test]
    fn multiplier_zero_implies_uhh_fails() {
        // Integer grid at (4,2) and (5,2): whenever the criterion fails and
        // k exceeds the threshold, μ_k vanishes; and μ_k vanishes only when
        // the criterion fails.
        for n in [4usize, 5] {
            for a in -1..=4 {
                for b in -1..=4 {
                    let lam = MultiIndex::real(&[a as f64, b as f64]);
                    if !in_l_set(&lam) {
                        continue;
                    }
                    let threshold = (a + 1).max(b);
                    for k in (0..=8u32).step_by(2) {
                        let mu = multiplier_mu(&lam, k, n);
                        if mu.is_zero() {
                            assert!(!uhh_holds(&lam), "λ = ({a},{b}), k = {k}");
                        }
                        if !uhh_holds(&lam) && k as i64 > threshold as i64 {
                            assert!(mu.is_zero(), "λ = ({a},{b}), k = {k}: {mu:?}");
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn cone_gamma_of_constant_is_siegel(l in -6.0f64..8.0, im in -2.0f64..2.0, m in 1usize..=4) {
            let lam = C64::new(l, im);
            let a = gamma_cone(&MultiIndex::constant(lam, m));
            let b = siegel_gamma(lam * 0.5, m);
            match (a, b) {
                (TaggedValue::Finite(x), TaggedValue::Finite(y)) => prop_assert!(close(x, y, 1e-12)),
                _ => prop_assert_eq!(a, b),
            }
        }
    }
}
