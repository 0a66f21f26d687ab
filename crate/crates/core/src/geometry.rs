//! Stiefel frames, polar and triangular coordinates on `R^{n x m}`, and the
//! integration engines built on them.
//!
//! Haar measure on `V_{n,m}` is normalized to total mass `σ_{n,m}`; the
//! samplers draw from the probability measure and the integrators apply the
//! mass.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::cone::{log_composite_power, MultiIndex, PosDefMatrix};
use crate::error::{dims, Error, Result};
use crate::linalg::{orthogonal_complement, qr_positive, symmetric_function, Matrix};
use crate::mc::{estimate_mean, Executor, McConfig, McEstimate, Rng, RngStream};
use crate::quadrature::{gauss_hermite, gauss_laguerre, integrate_tensor, DeRule, Domain};
use crate::special::{log_gamma_complex, stiefel_volume};
use crate::C64;

/// Orthonormality tolerance for [`StiefelFrame::new`].
pub const FRAME_TOLERANCE: f64 = 1e-12;

/// An orthonormal `m`-frame in `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct StiefelFrame {
    v: Matrix,
}

impl StiefelFrame {
    pub fn new(v: Matrix) -> Result<Self> {
        if v.cols() == 0 || v.cols() > v.rows() {
            return Err(dims("a frame needs 1 <= m <= n"));
        }
        let deviation = v.orthonormality_defect();
        if deviation > FRAME_TOLERANCE {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(StiefelFrame { v })
    }

    /// The first `m` standard basis vectors.
    pub fn standard(n: usize, m: usize) -> Result<Self> {
        Self::new(Matrix::eye(n, m))
    }

    /// Orthonormalizes the columns of `x` (positive-diagonal QR gauge).
    pub fn orthonormalize(x: &Matrix) -> Result<Self> {
        let (q, _) = qr_positive(x)?;
        Ok(StiefelFrame { v: q })
    }

    pub(crate) fn from_trusted(v: Matrix) -> Self {
        StiefelFrame { v }
    }

    pub fn n(&self) -> usize {
        self.v.rows()
    }

    pub fn m(&self) -> usize {
        self.v.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.v
    }

    /// A frame spanning the orthogonal complement (`n x (n - m)`).
    pub fn complement(&self) -> Result<StiefelFrame> {
        if self.m() == self.n() {
            return Err(dims("a full frame has no complement"));
        }
        Ok(StiefelFrame {
            v: orthogonal_complement(&self.v),
        })
    }

    /// `γ v` for an orthogonal `γ`.
    pub fn rotate(&self, gamma: &Matrix) -> StiefelFrame {
        StiefelFrame {
            v: gamma.matmul(&self.v),
        }
    }

    /// The projection `v v'` onto the spanned subspace.
    pub fn projector(&self) -> Matrix {
        self.v.matmul(&self.v.transpose())
    }
}

pub fn standard_normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// A chi variate with `dof > 0` (not necessarily integer) degrees of freedom.
pub fn chi(rng: &mut Rng, dof: f64) -> Result<f64> {
    let d = ChiSquared::new(dof).map_err(|_| dims(alloc::format!("chi with {dof} degrees of freedom")))?;
    Ok(d.sample(rng).sqrt())
}

/// An `n x m` matrix of independent standard normals.
pub fn gaussian_matrix(n: usize, m: usize, rng: &mut Rng) -> Matrix {
    Matrix::from_fn(n, m, |_, _| standard_normal(rng))
}

/// A Haar-distributed frame: Gaussian matrix, then QR with positive diagonal.
pub fn sample_stiefel(n: usize, m: usize, rng: &mut Rng) -> Result<StiefelFrame> {
    if m == 0 || m > n {
        return Err(dims(alloc::format!("V_{{n,m}} needs 1 <= m <= n (n = {n}, m = {m})")));
    }
    loop {
        match qr_positive(&gaussian_matrix(n, m, rng)) {
            Ok((q, _)) => return Ok(StiefelFrame { v: q }),
            Err(Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// [`sample_stiefel`] from a named stream.
pub fn sample_stiefel_stream(n: usize, m: usize, stream: &RngStream) -> Result<StiefelFrame> {
    sample_stiefel(n, m, &mut stream.rng())
}

/// A Haar-distributed orthogonal `n x n` matrix.
pub fn sample_orthogonal(n: usize, rng: &mut Rng) -> Matrix {
    sample_stiefel(n, n, rng).expect("n >= 1").v
}

/// Symmetric square root of a positive semidefinite matrix.
pub fn spd_sqrt(r: &Matrix) -> Matrix {
    if r.rows() == 1 {
        return Matrix::diag(&[r[(0, 0)].max(0.0).sqrt()]);
    }
    if r.rows() == 2 {
        // √r = (r + √det I) / √(tr r + 2√det)
        let det = (r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)]).max(0.0);
        let sd = det.sqrt();
        let denom = (r.trace() + 2.0 * sd).sqrt();
        return Matrix::from_fn(2, 2, |i, j| (r[(i, j)] + if i == j { sd } else { 0.0 }) / denom);
    }
    symmetric_function(r, |x| x.max(0.0).sqrt())
}

/// `x = v r^{1/2}` with `r = x'x` and `v = x r^{-1/2}`.
pub fn polar_decompose(x: &Matrix) -> Result<(StiefelFrame, PosDefMatrix)> {
    let m = x.cols();
    if m == 0 || m > x.rows() {
        return Err(dims("polar decomposition needs 1 <= m <= n"));
    }
    let r = PosDefMatrix::new(x.gram()).map_err(|_| Error::RankDeficient { expected: m })?;
    let inv_sqrt = symmetric_function(r.entries(), |s| 1.0 / s.sqrt());
    let v = x.matmul(&inv_sqrt);
    Ok((StiefelFrame { v }, r))
}

/// `x = u t` with `u ∈ V_{n,m}` and `t` upper triangular with positive
/// diagonal.
pub fn triangular_decompose(x: &Matrix) -> Result<(StiefelFrame, Matrix)> {
    let (q, t) = qr_positive(x)?;
    Ok((StiefelFrame { v: q }, t))
}

/// `∫_{V_{n,m}} f(v) dv` with total mass `σ_{n,m}`.
pub fn integrate_stiefel(
    f: &(dyn Fn(&StiefelFrame) -> Result<C64> + Sync),
    n: usize,
    m: usize,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<McEstimate> {
    let mass = stiefel_volume(n, m)?;
    let est = estimate_mean(config, exec, &|rng: &mut Rng| f(&sample_stiefel(n, m, rng)?))?;
    Ok(est.scale(C64::new(mass, 0.0)))
}

/// `log E[∏_j chi_{d - j + 1}^{e_j}] = Σ_j (e_j/2) log 2 + log Γ((d-j+1+e_j)/2) - log Γ((d-j+1)/2)`.
pub fn log_chi_moment(d: usize, e: &[f64]) -> f64 {
    e.iter()
        .enumerate()
        .map(|(j, &ej)| {
            let a = (d - j) as f64;
            0.5 * ej * LN_2 + lgamma_real((a + ej) / 2.0) - lgamma_real(a / 2.0)
        })
        .sum()
}

fn lgamma_real(x: f64) -> f64 {
    log_gamma_complex(C64::new(x, 0.0))
        .expect("positive argument")
        .re
}

/// Proposal for integrals over `R^{n x m}`: density proportional to
/// `(x'x)^β e^{-s|x|^2/2}` (or `(x'x)_*^β` when `reversed`).
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianProposal {
    pub scale: f64,
    pub tilt: Option<Vec<f64>>,
    pub reversed: bool,
}

/// One proposal draw with its importance weight `1/q(x)`.
#[derive(Clone, Debug)]
pub struct GaussianDraw {
    pub x: Matrix,
    pub weight: f64,
    reversed: bool,
    /// The exact `(u, t)` a tilted draw was built from.
    factor: Option<(StiefelFrame, Matrix)>,
}

impl GaussianDraw {
    /// `x = ut` (`xω = ut` for a reversed proposal) with `t` upper
    /// triangular. Tilted draws return the factor they were sampled from,
    /// which stays exact when a pivot is far below the rank tolerance of QR.
    pub fn factor(&self) -> Result<(StiefelFrame, Matrix)> {
        match &self.factor {
            Some(f) => Ok(f.clone()),
            None if self.reversed => triangular_decompose(&reverse_columns(&self.x)),
            None => triangular_decompose(&self.x),
        }
    }
}

impl GaussianProposal {
    pub fn standard() -> Self {
        Self::with_scale(1.0)
    }

    pub fn with_scale(scale: f64) -> Self {
        GaussianProposal {
            scale,
            tilt: None,
            reversed: false,
        }
    }

    /// A proposal adapted to an integrand containing `(x'x)^e` (or
    /// `(x'x)_*^e`): each exponent that would leave the plain estimator with
    /// infinite or near-infinite variance is half-absorbed into the proposal.
    pub fn for_power(n: usize, e: &[f64], scale: f64, reversed: bool) -> Self {
        // With `x = x̃ω`, `(x'x)_*^e = (x̃'x̃)^e`, so the exponents apply to the
        // unreversed draw unchanged.
        let beta: Vec<f64> = e
            .iter()
            .enumerate()
            .map(|(j, &ej)| {
                let edge = (j + 1) as f64 - n as f64 - 1.0;
                if ej < edge / 2.0 + 0.25 {
                    (ej + edge) / 2.0
                } else {
                    0.0
                }
            })
            .collect();
        GaussianProposal {
            scale,
            tilt: if beta.iter().all(|&b| b == 0.0) { None } else { Some(beta) },
            reversed,
        }
    }

    pub fn sample(&self, n: usize, m: usize, rng: &mut Rng) -> Result<GaussianDraw> {
        let s = self.scale;
        let nm = (n * m) as f64;
        let log_q0 = |x: &Matrix| 0.5 * nm * (s / (2.0 * PI)).ln() - 0.5 * s * x.dot(x);
        match &self.tilt {
            None => {
                let x = gaussian_matrix(n, m, rng).scale(1.0 / s.sqrt());
                let weight = (-log_q0(&x)).exp();
                Ok(GaussianDraw {
                    x,
                    weight,
                    reversed: self.reversed,
                    factor: None,
                })
            }
            Some(beta) => {
                if beta.len() != m {
                    return Err(dims("tilt length must equal m"));
                }
                let u = sample_stiefel(n, m, rng)?;
                let mut t = Matrix::zeros(m, m);
                let mut log_tilt = 0.0;
                for j in 0..m {
                    let d = chi(rng, (n - j) as f64 + beta[j])?;
                    t[(j, j)] = d;
                    log_tilt += beta[j] * (d / s.sqrt()).ln();
                    for i in 0..j {
                        t[(i, j)] = standard_normal(rng);
                    }
                }
                let t = t.scale(1.0 / s.sqrt());
                let mut x = u.v.matmul(&t);
                if self.reversed {
                    x = reverse_columns(&x);
                }
                let total: f64 = beta.iter().sum();
                let log_e = log_chi_moment(n, beta) - 0.5 * total * s.ln();
                let log_q = log_q0(&x) + log_tilt - log_e;
                Ok(GaussianDraw {
                    x,
                    weight: (-log_q).exp(),
                    reversed: self.reversed,
                    factor: Some((u, t)),
                })
            }
        }
    }
}

/// `x ω`: columns in reverse order.
pub fn reverse_columns(x: &Matrix) -> Matrix {
    let m = x.cols();
    Matrix::from_fn(x.rows(), m, |i, j| x[(i, m - 1 - j)])
}

/// `∫_{R^{n x m}} g(x) dx` by importance sampling from `proposal`.
pub fn integrate_matrix_gaussian(
    g: &(dyn Fn(&Matrix) -> Result<C64> + Sync),
    n: usize,
    m: usize,
    proposal: &GaussianProposal,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<McEstimate> {
    estimate_mean(config, exec, &|rng: &mut Rng| {
        let draw = proposal.sample(n, m, rng)?;
        Ok(g(&draw.x)? * draw.weight)
    })
}

/// Importance sampler on `V_{n,m}` for kernels in `w = u'v`.
///
/// With a tilt `α`, frames are drawn with density `(ww')^α / C_α` relative
/// to normalized Haar measure, where
/// `C_α = ∏_j Γ((m-j+1+α_j)/2) Γ((n-j+1)/2) / (Γ((m-j+1)/2) Γ((n-j+1+α_j)/2))`.
/// Construction: the top block of the Q factor of `[z_top; z_bot]`, with
/// `z_top` from the tilted `m x m` Gaussian, has that law after
/// transposition; the component along `u_⊥` is completed by an independent
/// Haar frame of `V_{n-m,m}`, which needs `2m <= n`.
#[derive(Clone, Debug)]
pub struct KernelSampler {
    n: usize,
    m: usize,
    u: Matrix,
    u_perp: Option<Matrix>,
    alpha: Option<Vec<f64>>,
    log_c: f64,
}

/// One draw of [`KernelSampler`].
#[derive(Clone, Debug)]
pub struct KernelDraw {
    pub v: StiefelFrame,
    /// `u'v v'u`.
    pub gram: PosDefMatrix,
    /// Log of the Haar-to-proposal density ratio (0 without tilt).
    pub log_weight: f64,
}

impl KernelSampler {
    pub fn plain(u: &StiefelFrame) -> Self {
        KernelSampler {
            n: u.n(),
            m: u.m(),
            u: u.v.clone(),
            u_perp: None,
            alpha: None,
            log_c: 0.0,
        }
    }

    pub fn tilted(u: &StiefelFrame, alpha: Vec<f64>) -> Result<Self> {
        let (n, m) = (u.n(), u.m());
        if 2 * m > n {
            return Err(Error::DimensionsTooSmall { n, m });
        }
        if alpha.len() != m {
            return Err(dims("tilt length must equal m"));
        }
        for (j, &a) in alpha.iter().enumerate() {
            if !(a + (m - j) as f64 > 0.0) {
                return Err(Error::ConvergenceDomain(alloc::format!("tilt component {a} at j = {}", j + 1)));
            }
        }
        let log_c = alpha
            .iter()
            .enumerate()
            .map(|(j, &a)| {
                let (mj, nj) = ((m - j) as f64, (n - j) as f64);
                lgamma_real((mj + a) / 2.0) + lgamma_real(nj / 2.0) - lgamma_real(mj / 2.0) - lgamma_real((nj + a) / 2.0)
            })
            .sum();
        Ok(KernelSampler {
            n,
            m,
            u: u.v.clone(),
            u_perp: Some(orthogonal_complement(&u.v)),
            alpha: Some(alpha),
            log_c,
        })
    }

    /// Tilt for the kernel `(u'vv'u)^λ`: components whose plain second
    /// moment is infinite or nearly so get `α_j = (Re λ_j + j - m - 1)/2`.
    /// Falls back to plain Haar sampling when no component needs it or when
    /// `2m > n`.
    pub fn for_kernel(u: &StiefelFrame, lambda: &MultiIndex) -> Result<Self> {
        let m = u.m();
        let alpha: Vec<f64> = lambda
            .iter()
            .enumerate()
            .map(|(j, l)| {
                let edge = (j + 1) as f64 - m as f64 - 1.0;
                if l.re < edge / 2.0 + 0.25 {
                    (l.re + edge) / 2.0
                } else {
                    0.0
                }
            })
            .collect();
        if alpha.iter().all(|&a| a == 0.0) || 2 * m > u.n() {
            Ok(Self::plain(u))
        } else {
            Self::tilted(u, alpha)
        }
    }

    pub fn alpha(&self) -> Option<&[f64]> {
        self.alpha.as_deref()
    }

    pub fn sample(&self, rng: &mut Rng) -> Result<KernelDraw> {
        let (n, m) = (self.n, self.m);
        let (alpha, u_perp) = match (&self.alpha, &self.u_perp) {
            (Some(a), Some(p)) => (a, p),
            _ => {
                let v = sample_stiefel(n, m, rng)?;
                let w = self.u.tr_matmul(&v.v);
                let gram = PosDefMatrix::new(w.matmul(&w.transpose()))?;
                return Ok(KernelDraw { v, gram, log_weight: 0.0 });
            }
        };
        let q = sample_stiefel(m, m, rng)?;
        let mut tau = Matrix::zeros(m, m);
        for j in 0..m {
            tau[(j, j)] = chi(rng, (m - j) as f64 + alpha[j])?;
            for i in 0..j {
                tau[(i, j)] = standard_normal(rng);
            }
        }
        let z = q.v.matmul(&tau).vcat(&gaussian_matrix(n - m, m, rng));
        let (_, r) = qr_positive(&z)?;
        // The top block of the Q factor is q τ r^{-1}, and τ r^{-1} is the
        // Cholesky factor of ww'. Building the gram from it keeps tiny
        // pivots (small-dof chi draws) that forming ww' would round away.
        let chol = tau.matmul(&upper_triangular_inverse(&r));
        let w = q.v.matmul(&chol).transpose();
        let gram = PosDefMatrix::from_upper(&chol)?;
        let c = sample_stiefel(n - m, m, rng)?;
        let rest = spd_sqrt(&Matrix::identity(m).sub(&w.tr_matmul(&w)));
        let v = self.u.matmul(&w).add(&u_perp.matmul(&c.v.matmul(&rest)));
        let alpha_index = MultiIndex::real(alpha);
        let log_weight = self.log_c - log_composite_power(&gram, &alpha_index).re;
        Ok(KernelDraw {
            v: StiefelFrame::from_trusted(v),
            gram,
            log_weight,
        })
    }
}

fn upper_triangular_inverse(r: &Matrix) -> Matrix {
    let m = r.rows();
    let mut inv = Matrix::zeros(m, m);
    for j in 0..m {
        inv[(j, j)] = 1.0 / r[(j, j)];
        for i in (0..j).rev() {
            let s: f64 = (i + 1..=j).map(|k| r[(i, k)] * inv[(k, j)]).sum();
            inv[(i, j)] = -s / r[(i, i)];
        }
    }
    inv
}

/// Measure on the cone used by [`integrate_cone`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeMeasure {
    /// `d_*r = |r|^{-(m+1)/2} dr`.
    Invariant,
    /// Lebesgue measure `dr` on the entries `r_ij`, `i <= j`.
    Lebesgue,
}

fn triangular_domains(m: usize) -> Vec<Domain> {
    let mut d = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in i..m {
            d.push(if i == j { Domain::HalfLine } else { Domain::Line });
        }
    }
    d
}

fn upper_from_coords(m: usize, p: &[f64]) -> Matrix {
    let mut t = Matrix::zeros(m, m);
    let mut k = 0;
    for i in 0..m {
        for j in i..m {
            t[(i, j)] = p[k];
            k += 1;
        }
    }
    t
}

fn check_quadrature_rank(m: usize) -> Result<()> {
    if m == 0 || m > 2 {
        return Err(dims(alloc::format!("cone quadrature is limited to m <= 2 (m = {m})")));
    }
    Ok(())
}

/// `∫_Ω h(r) dμ(r)` for `m <= 2` by double-exponential quadrature in
/// Cholesky coordinates `r = t't`, where
/// `dr = 2^m ∏ t_jj^{m+1-j} dt` and `d_*r = 2^m ∏ t_jj^{-j} dt`.
pub fn integrate_cone(
    h: impl Fn(&PosDefMatrix) -> C64,
    m: usize,
    measure: ConeMeasure,
    rule: &DeRule,
) -> Result<C64> {
    check_quadrature_rank(m)?;
    integrate_tensor(&triangular_domains(m), rule, |p| cone_integrand(&h, m, measure, p))
}

fn cone_integrand(h: &impl Fn(&PosDefMatrix) -> C64, m: usize, measure: ConeMeasure, p: &[f64]) -> C64 {
    let t = upper_from_coords(m, p);
    let mut jac = (m as f64 * LN_2).exp();
    for j in 0..m {
        let e = match measure {
            ConeMeasure::Invariant => -((j + 1) as i32),
            ConeMeasure::Lebesgue => (m - j) as i32,
        };
        jac *= t[(j, j)].powi(e);
    }
    match PosDefMatrix::from_upper(&t) {
        Ok(r) if jac.is_finite() => h(&r) * jac,
        _ => C64::new(0.0, 0.0),
    }
}

/// `∫_{T_m} g(t) dt` over upper-triangular matrices with positive diagonal
/// (Lebesgue measure on the entries), `m <= 2`.
pub fn integrate_triangular(g: impl Fn(&Matrix) -> C64, m: usize, rule: &DeRule) -> Result<C64> {
    check_quadrature_rank(m)?;
    integrate_tensor(&triangular_domains(m), rule, |p| g(&upper_from_coords(m, p)))
}

/// Gauss rules matched to the weight `∏_j t_jj^{n-j} e^{-s|t|^2/2}` on
/// `T_m`, used as the inner quadrature of the coordinate-integral estimators.
/// Exact for Gaussian-times-polynomial integrands of moderate degree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InnerRule {
    /// Nodes per coordinate.
    pub nodes: usize,
    /// Scale `s` of the Gaussian factored out of the integrand.
    pub scale: f64,
}

impl Default for InnerRule {
    fn default() -> Self {
        InnerRule { nodes: 16, scale: 1.0 }
    }
}

impl InnerRule {
    /// Nodes `t` (upper triangular) and weights `W` with
    /// `∫_{T_m} F(t) ∏ t_jj^{n-j} e^{-s|t|^2/2} dt ≈ Σ W F(t)`.
    fn tensor(&self, n: usize, m: usize) -> Vec<(Matrix, f64)> {
        let s = self.scale;
        let hermite = gauss_hermite(self.nodes);
        // ∫_0^∞ t^p e^{-st²/2} g(t) dt = (1/2)(2/s)^{(p+1)/2} ∫_0^∞ u^{(p-1)/2} e^{-u} g(√(2u/s)) du.
        let laguerre: Vec<(Vec<f64>, Vec<f64>)> = (0..m)
            .map(|j| {
                let p = (n - j - 1) as f64;
                let (u, w) = gauss_laguerre(self.nodes, (p - 1.0) / 2.0);
                let c = 0.5 * (2.0 / s).powf((p + 1.0) / 2.0);
                (u.iter().map(|u| (2.0 * u / s).sqrt()).collect(), w.iter().map(|w| w * c).collect())
            })
            .collect();
        let hermite = (
            hermite.0.iter().map(|x| x / s.sqrt()).collect::<Vec<f64>>(),
            hermite.1.iter().map(|w| w / s.sqrt()).collect::<Vec<f64>>(),
        );
        let mut out = vec![(Matrix::zeros(m, m), 1.0)];
        for i in 0..m {
            for j in i..m {
                let (x, w) = if i == j { &laguerre[i] } else { &hermite };
                out = out
                    .into_iter()
                    .flat_map(|(t, wt)| {
                        x.iter().zip(w).map(move |(&xk, &wk)| {
                            let mut t = t.clone();
                            t[(i, j)] = xk;
                            (t, wt * wk)
                        })
                    })
                    .collect();
            }
        }
        out
    }
}

/// `∫ φ(x) dx` in polar coordinates,
/// `2^{-m} ∫_{V_{n,m}} ∫_Ω |r|^{(n-m-1)/2} φ(v r^{1/2}) dr dv`:
/// Monte Carlo over frames, Gauss quadrature over the cone in Cholesky
/// coordinates `r = t't` (where `dr = 2^m ∏ t_jj^{m+1-j} dt`).
pub fn integrate_polar_coordinates(
    phi: &(dyn Fn(&Matrix) -> C64 + Sync),
    n: usize,
    m: usize,
    inner: InnerRule,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<McEstimate> {
    check_quadrature_rank(m)?;
    // 2^{-m} |r|^{(n-m-1)/2} 2^m ∏ t_jj^{m+1-j} = ∏ t_jj^{n-j}: exactly the rule weight.
    let rule = inner.tensor(n, m);
    let s = inner.scale;
    integrate_stiefel(
        &|v: &StiefelFrame| {
            Ok(rule
                .iter()
                .map(|(t, w)| {
                    let x = v.v.matmul(&spd_sqrt(&t.gram()));
                    phi(&x) * ((0.5 * s * x.dot(&x)).exp() * w)
                })
                .sum())
        },
        n,
        m,
        config,
        exec,
    )
}

/// `∫ φ(x) dx` in triangular coordinates,
/// `∫_{V_{n,m}} ∫_{T_m} φ(u t) ∏_j t_jj^{n-j} dt du`.
pub fn integrate_triangular_coordinates(
    phi: &(dyn Fn(&Matrix) -> C64 + Sync),
    n: usize,
    m: usize,
    inner: InnerRule,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<McEstimate> {
    check_quadrature_rank(m)?;
    let rule = inner.tensor(n, m);
    let s = inner.scale;
    integrate_stiefel(
        &|u: &StiefelFrame| {
            Ok(rule
                .iter()
                .map(|(t, w)| phi(&u.v.matmul(t)) * ((0.5 * s * t.dot(t)).exp() * w))
                .sum())
        },
        n,
        m,
        config,
        exec,
    )
}
