//! Deterministic quadrature: Gauss-Legendre nodes and double-exponential
//! rules on `(0, ∞)` and `R`, with tensor products over a few coordinates.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::special::log_gamma_complex;
use crate::C64;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights are
// `mu0` times the squared first components of the eigenvectors.
fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let j = Matrix::from_fn(n, n, |a, b| {
        if a == b {
            diag[a]
        } else if a + 1 == b {
            off[a]
        } else if b + 1 == a {
            off[b]
        } else {
            0.0
        }
    });
    let (values, vectors) = symmetric_eigen(&j);
    let mut pairs: Vec<(f64, f64)> = (0..n).map(|k| (values[k], mu0 * vectors[(0, k)] * vectors[(0, k)])).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Generalized Gauss-Laguerre rule for `∫_0^∞ u^α e^{-u} g(u) du`, `α > -1`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
    let mu0 = log_gamma_complex(C64::new(alpha + 1.0, 0.0)).expect("alpha > -1").re.exp();
    golub_welsch(&diag, &off, mu0)
}

/// Gauss-Hermite rule for `∫_R e^{-x^2/2} g(x) dx`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let off: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
    golub_welsch(&vec![0.0; n], &off, (2.0 * PI).sqrt())
}

/// Integration domain of one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `(0, ∞)`, exp-sinh substitution `x = exp(π/2 sinh s)`.
    HalfLine,
    /// `R`, sinh-sinh substitution `x = sinh(π/2 sinh s)`.
    Line,
}

/// Step size, truncation and refinement policy for the double-exponential
/// rules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeRule {
    /// Step of the coarsest level.
    pub h0: f64,
    /// Truncation `|s| <= s_max` in the substituted variable.
    pub s_max: f64,
    /// Number of halvings tried after the coarsest level.
    pub max_refinements: u32,
    /// Refinement stops once two levels agree to this relative accuracy.
    pub target: f64,
    /// Two final levels further apart than this raise an error.
    pub tolerance: f64,
}

impl Default for DeRule {
    fn default() -> Self {
        DeRule {
            h0: 0.5,
            s_max: 5.5,
            max_refinements: 3,
            target: 1e-10,
            // The last difference bounds the error of the coarser level; the
            // finer level is typically several digits better.
            tolerance: 1e-5,
        }
    }
}

/// Nodes and weights of one double-exponential level.
pub fn de_nodes(domain: Domain, h: f64, s_max: f64) -> (Vec<f64>, Vec<f64>) {
    let half = (s_max / h).floor() as i64;
    let mut nodes = Vec::with_capacity((2 * half + 1) as usize);
    let mut weights = Vec::with_capacity((2 * half + 1) as usize);
    for i in -half..=half {
        let s = i as f64 * h;
        let u = FRAC_PI_2 * s.sinh();
        let du = FRAC_PI_2 * s.cosh();
        let (x, w) = match domain {
            Domain::HalfLine => {
                let x = u.exp();
                (x, x * du * h)
            }
            Domain::Line => (u.sinh(), u.cosh() * du * h),
        };
        if x.is_finite() && w.is_finite() && w > 0.0 {
            nodes.push(x);
            weights.push(w);
        }
    }
    (nodes, weights)
}

fn tensor_level(domains: &[Domain], h: f64, s_max: f64, f: &mut dyn FnMut(&[f64]) -> C64) -> C64 {
    let rules: Vec<(Vec<f64>, Vec<f64>)> = domains.iter().map(|&d| de_nodes(d, h, s_max)).collect();
    let d = domains.len();
    let mut idx = vec![0usize; d];
    let mut point = vec![0.0; d];
    let mut sum = C64::new(0.0, 0.0);
    if rules.iter().any(|r| r.0.is_empty()) {
        return sum;
    }
    loop {
        let mut w = 1.0;
        for k in 0..d {
            point[k] = rules[k].0[idx[k]];
            w *= rules[k].1[idx[k]];
        }
        let v = f(&point);
        if v.re.is_finite() && v.im.is_finite() {
            sum += v * w;
        }
        let mut k = 0;
        loop {
            if k == d {
                return sum;
            }
            idx[k] += 1;
            if idx[k] < rules[k].0.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Tensor-product double-exponential quadrature of `f` over the product of
/// `domains`, refined by halving the step until two levels agree.
///
/// Non-finite integrand values (overflow far out on the tails, where the
/// weights vanish) are dropped.
pub fn integrate_tensor(
    domains: &[Domain],
    rule: &DeRule,
    mut f: impl FnMut(&[f64]) -> C64,
) -> Result<C64> {
    let mut h = rule.h0;
    let mut prev = tensor_level(domains, h, rule.s_max, &mut f);
    let mut relative = f64::INFINITY;
    for _ in 0..rule.max_refinements {
        h *= 0.5;
        let cur = tensor_level(domains, h, rule.s_max, &mut f);
        relative = (cur - prev).norm() / cur.norm().max(f64::MIN_POSITIVE);
        prev = cur;
        if relative <= rule.target {
            return Ok(cur);
        }
    }
    if relative <= rule.tolerance {
        Ok(prev)
    } else {
        Err(Error::QuadratureNotConverged { relative })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for p in 0..32u32 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
            let want = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "degree {p}");
        }
    }

    #[test]
    fn gauss_laguerre_and_hermite_moments() {
        for alpha in [-0.5, 0.0, 1.5, 3.0] {
            let (u, w) = gauss_laguerre(12, alpha);
            for k in 0..24 {
                let got: f64 = u.iter().zip(&w).map(|(u, w)| w * u.powi(k)).sum();
                let want = log_gamma_complex(C64::new(alpha + k as f64 + 1.0, 0.0)).unwrap().re.exp();
                assert!((got - want).abs() < 1e-11 * want, "alpha = {alpha}, k = {k}");
            }
        }
        let (x, w) = gauss_hermite(12);
        let mut double_factorial = 1.0;
        for k in 0..12 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2 * k)).sum();
            let want = (2.0 * PI).sqrt() * double_factorial;
            assert!((got - want).abs() < 1e-11 * want, "k = {k}");
            let odd: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2 * k + 1)).sum();
            assert!(odd.abs() < 1e-9 * want);
            double_factorial *= (2 * k + 1) as f64;
        }
    }

    #[test]
    fn exp_sinh_recovers_gamma() {
        // ∫_0^∞ x^{a-1} e^{-x} dx for a few a, including a small one.
        for &(a, g) in &[(1.0, 1.0), (2.0, 1.0), (0.5, 1.772_453_850_905_516), (4.5, 11.631_728_396_567_45)] {
            let v = integrate_tensor(&[Domain::HalfLine], &DeRule::default(), |p| {
                C64::new(p[0].powf(a - 1.0) * (-p[0]).exp(), 0.0)
            })
            .unwrap();
            assert!((v.re - g).abs() < 1e-10 * g, "a = {a}: {}", v.re);
        }
    }

    #[test]
    fn sinh_sinh_gaussian_and_tensor() {
        let v = integrate_tensor(&[Domain::Line, Domain::Line], &DeRule::default(), |p| {
            C64::new((-(p[0] * p[0] + 2.0 * p[1] * p[1])).exp(), 0.0)
        })
        .unwrap();
        assert!((v.re - PI / 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn reports_non_convergence() {
        let rule = DeRule { max_refinements: 1, h0: 2.0, ..DeRule::default() };
        let r = integrate_tensor(&[Domain::Line], &rule, |p| C64::new((p[0] * 40.0).cos() * (-p[0] * p[0]).exp(), 0.0));
        assert!(matches!(r, Err(Error::QuadratureNotConverged { .. })));
    }
}
