//! Zeta integrals `∫ r^λ f(v) φ(x) dx` over `R^{n x m}` and the Fourier
//! identities that connect them with `T^λ`.
//!
//! Fourier transforms use `(Fφ)(y) = ∫ e^{i tr(y'x)} φ(x) dx`, for which
//! Parseval reads `(Fφ, Fψ) = (2π)^{nm} (φ, ψ)`. Test functions are real, so
//! the conjugations in the pairings drop out.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;


use super::cosine::frame_value;
use super::{AngleFunction, HPolynomial, Invariance};
use crate::check::Comparison;
use crate::cone::{composite_power, log_composite_power, reverse_index, MultiIndex, PosDefMatrix};
use crate::error::{dims, Error, Result};
use crate::geometry::{polar_decompose, reverse_columns, GaussianProposal, KernelSampler};
use crate::linalg::Matrix;
use crate::mc::{estimate_mean, Executor, McConfig, McEstimate, Rng};
use crate::special::{gamma_cone, i_pow, stiefel_volume, TaggedValue};
use crate::C64;

/// Margin by which strip conditions must hold strictly.
pub const STRIP_TOLERANCE: f64 = 1e-12;

/// `φ(x) = e^{-s tr(x'x)/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianSchwartz {
    pub scale: f64,
}

impl GaussianSchwartz {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(dims(alloc::format!("Gaussian scale must be positive, got {scale}")));
        }
        Ok(GaussianSchwartz { scale })
    }

    pub fn unit() -> Self {
        GaussianSchwartz { scale: 1.0 }
    }

    pub fn eval(&self, x: &Matrix) -> f64 {
        (-0.5 * self.scale * x.dot(x)).exp()
    }

    /// `(Fφ)(y) = (2π/s)^{nm/2} e^{-tr(y'y)/(2s)}`.
    pub fn fourier(&self, y: &Matrix) -> f64 {
        let nm = (y.rows() * y.cols()) as f64;
        (0.5 * nm * (2.0 * PI / self.scale).ln() - 0.5 * y.dot(y) / self.scale).exp()
    }

    /// The proposal with the same Gaussian factor as `φ`.
    fn proposal(&self, n: usize, lambda: &MultiIndex, reversed: bool) -> GaussianProposal {
        GaussianProposal::for_power(n, &lambda.re(), self.scale, reversed)
    }

    /// `Fφ` is again of this form, up to the constant `(2π/s)^{nm/2}`.
    fn dual(&self) -> GaussianSchwartz {
        GaussianSchwartz { scale: 1.0 / self.scale }
    }
}

fn require_strip(lambda: &MultiIndex, lower: impl Fn(usize) -> f64, upper: impl Fn(usize) -> f64, what: &str) -> Result<()> {
    for (j, l) in lambda.iter().enumerate() {
        let (lo, hi) = (lower(j + 1), upper(j + 1));
        if !(l.re > lo + STRIP_TOLERANCE && l.re < hi - STRIP_TOLERANCE) {
            return Err(Error::ConvergenceDomain(alloc::format!(
                "{what}: Re λ_{} = {} outside ({lo}, {hi})",
                j + 1,
                l.re
            )));
        }
    }
    Ok(())
}

fn require_lambda_set(lambda: &MultiIndex, n: usize) -> Result<()> {
    require_strip(lambda, |j| j as f64 - n as f64 - 1.0, |_| f64::INFINITY, "zeta integral")
}

fn zeta_impl(
    phi: &GaussianSchwartz,
    lambda: &MultiIndex,
    f: &dyn AngleFunction,
    n: usize,
    config: &McConfig,
    exec: &dyn Executor,
    reversed: bool,
) -> Result<McEstimate> {
    let m = lambda.len();
    if m == 0 || m > n {
        return Err(dims("zeta integral needs 1 <= m <= n"));
    }
    require_lambda_set(lambda, n)?;
    let proposal = phi.proposal(n, lambda, reversed);
    estimate_mean(config, exec, &|rng: &mut Rng| {
        let draw = proposal.sample(n, m, rng)?;
        // r^λ = (t't)^λ for x = ut, and r_*^λ = (ωrω)^λ comes from the
        // factor of xω = ut.
        let (u, t) = draw.factor()?;
        let r_power = composite_power(&PosDefMatrix::from_upper(&t)?, lambda);
        // The polar frame of x is u (uω when reversed) times a rotation in
        // SO(m), so invariant functions skip the ill-conditioned r^{-1/2}.
        let angular = match (f.constant(), f.invariance()) {
            (Some(c), _) => c,
            (None, Invariance::RightO | Invariance::RightSO) if reversed => f.eval(&reverse_columns(u.matrix())),
            (None, Invariance::RightO | Invariance::RightSO) => f.eval(u.matrix()),
            (None, Invariance::None) => f.eval(polar_decompose(&draw.x)?.0.matrix()),
        };
        Ok(r_power * angular * (phi.eval(&draw.x) * draw.weight))
    })
}

/// `Z(φ, λ, f) = ∫ r^λ f(v) φ(x) dx`, `x = v r^{1/2}`, for `λ ∈ Λ`.
pub fn zeta_integral(
    phi: &GaussianSchwartz,
    lambda: &MultiIndex,
    f: &dyn AngleFunction,
    n: usize,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<McEstimate> {
    zeta_impl(phi, lambda, f, n, config, exec, false)
}

/// `Z_*(φ, λ, f) = ∫ r_*^λ f(v) φ(x) dx`.
pub fn zeta_star(
    phi: &GaussianSchwartz,
    lambda: &MultiIndex,
    f: &dyn AngleFunction,
    n: usize,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<McEstimate> {
    zeta_impl(phi, lambda, f, n, config, exec, true)
}

/// `Z / Γ_Ω(λ + n_0)`.
pub fn normalized_zeta(z: &McEstimate, lambda: &MultiIndex, n: usize) -> Result<McEstimate> {
    match gamma_cone(&lambda.shift_real(n as f64)) {
        TaggedValue::Finite(g) => Ok(z.scale(g.inv())),
        TaggedValue::Pole(_) => Ok(z.scale(C64::new(0.0, 0.0))),
        TaggedValue::Zero(_) => Err(Error::ConvergenceDomain("Γ_Ω(λ + n_0) vanishes".into())),
    }
}

/// Closed form of `Z(φ, λ, 1) = Z_*(φ, λ, 1)` for Gaussian `φ`:
/// `2^{-m} σ_{n,m} Γ_Ω(λ + n_0) (2/s)^{(|λ| + nm)/2}`.
pub fn zeta_closed_form(phi: &GaussianSchwartz, lambda: &MultiIndex, n: usize) -> Result<TaggedValue> {
    let m = lambda.len();
    let sigma = stiefel_volume(n, m)?;
    let pref = C64::new(2.0f64.powi(-(m as i32)) * sigma, 0.0)
        * ((lambda.total() + (n * m) as f64) * 0.5 * (2.0 / phi.scale).ln()).exp();
    Ok(match gamma_cone(&lambda.shift_real(n as f64)) {
        TaggedValue::Finite(g) => TaggedValue::Finite(pref * g),
        other => other,
    })
}

/// Two sides of an identity, each estimated independently, with optional
/// closed forms.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub lhs: McEstimate,
    pub rhs: McEstimate,
    pub lhs_closed: Option<C64>,
    pub rhs_closed: Option<C64>,
}

impl IdentityReport {
    pub fn comparisons(&self, label: &str) -> Vec<Comparison> {
        let mut out = alloc::vec![Comparison::estimates(alloc::format!("{label}/lhs_vs_rhs"), &self.lhs, &self.rhs)];
        if let Some(c) = self.lhs_closed {
            out.push(Comparison::estimate_vs_value(alloc::format!("{label}/lhs_vs_closed"), &self.lhs, c));
        }
        if let Some(c) = self.rhs_closed {
            out.push(Comparison::estimate_vs_value(alloc::format!("{label}/rhs_vs_closed"), &self.rhs, c));
        }
        out
    }

    pub fn pass(&self) -> bool {
        self.comparisons("").iter().all(|c| c.pass)
    }
}

fn finite(t: TaggedValue, what: &str) -> Result<C64> {
    t.finite()
        .ok_or_else(|| Error::ConvergenceDomain(alloc::format!("{what} is {}", t.kind())))
}

/// `c_λ = 2^{-|λ|} π^{m^2/2} / σ_{m,m}`.
fn functional_constant(lambda: &MultiIndex) -> Result<C64> {
    let m = lambda.len();
    let log = -lambda.total() * core::f64::consts::LN_2 + (m * m) as f64 / 2.0 * PI.ln();
    Ok(log.exp() / stiefel_volume(m, m)?)
}

/// `c_λ / Γ_Ω(λ + m_0) (T^λ f, Fφ) = (2π)^{nm} Z_*(φ, -λ_* - n_0, f) / Γ_Ω(-λ_*)`
/// inside the strip `j - m - 1 < Re λ_j < j - m`, for right-`O(m)`-invariant `f`.
///
/// The left side is a joint estimate over `x` and one kernel frame per `x`,
/// so `T^λ f` is never tabulated. Closed forms are attached when `f` is
/// constant.
pub fn functional_equation_residual(
    lambda: &MultiIndex,
    f: &dyn AngleFunction,
    phi: &GaussianSchwartz,
    n: usize,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<IdentityReport> {
    let m = lambda.len();
    if m == 0 || 2 * m > n {
        return Err(dims("functional equation needs 1 <= m and 2m <= n"));
    }
    require_strip(lambda, |j| j as f64 - m as f64 - 1.0, |j| j as f64 - m as f64, "functional equation")?;
    let sigma = stiefel_volume(n, m)?;
    let left_const = functional_constant(lambda)? / finite(gamma_cone(&lambda.shift_real(m as f64)), "Γ_Ω(λ + m_0)")?;
    let dual = phi.dual();
    let proposal = dual.proposal(n, lambda, false);
    let lhs = estimate_mean(config, exec, &|rng: &mut Rng| {
        let draw = proposal.sample(n, m, rng)?;
        let (u, t) = draw.factor()?;
        let radial = composite_power(&PosDefMatrix::from_upper(&t)?, lambda);
        let sampler = KernelSampler::for_kernel(&u, lambda)?;
        let k = sampler.sample(rng)?;
        let kernel = (log_composite_power(&k.gram, lambda) + k.log_weight).exp();
        Ok(radial * kernel * frame_value(f, &k.v) * (sigma * phi.fourier(&draw.x) * draw.weight))
    })?
    .scale(left_const);

    let lam_star = reverse_index(lambda);
    let mu = (-&lam_star).shift_real(-(n as f64));
    let right_const = C64::new((2.0 * PI).powi((n * m) as i32), 0.0) / finite(gamma_cone(&-&lam_star), "Γ_Ω(-λ_*)")?;
    let rhs = zeta_star(phi, &mu, f, n, &config.derive(1), exec)?.scale(right_const);

    let (lhs_closed, rhs_closed) = match f.constant() {
        Some(c) => {
            let average = finite(crate::special::average_closed_form(lambda, n), "average")?;
            let nm = (n * m) as f64;
            let fourier_mass = (0.5 * nm * (2.0 * PI / phi.scale).ln()).exp();
            let l = left_const * c * average * fourier_mass * finite(zeta_closed_form(&dual, lambda, n)?, "Z")?;
            let r = right_const * c * finite(zeta_closed_form(phi, &mu, n)?, "Z_*")?;
            (Some(l), Some(r))
        }
        None => (None, None),
    };
    Ok(IdentityReport {
        lhs,
        rhs,
        lhs_closed,
        rhs_closed,
    })
}

/// Closed forms of the two sides of the power-function identity for
/// Gaussian `φ`: `(Γ_Ω(-λ_*) ∫ (y'y)^λ Fφ, c_λ Γ_Ω(λ + n_0) ∫ (x'x)_*^{-λ_*-n_0} φ)`.
pub fn power_fourier_closed_forms(lambda: &MultiIndex, n: usize, phi: &GaussianSchwartz) -> Result<(C64, C64)> {
    let (_, mu, c, g_star, g_n) = power_fourier_parts(lambda, n)?;
    let m = lambda.len();
    let fourier_mass = (0.5 * (n * m) as f64 * (2.0 * PI / phi.scale).ln()).exp();
    let lhs = g_star * fourier_mass * finite(zeta_closed_form(&phi.dual(), lambda, n)?, "Z")?;
    let rhs = c * g_n * finite(zeta_closed_form(phi, &mu, n)?, "Z_*")?;
    Ok((lhs, rhs))
}

type PowerParts = (MultiIndex, MultiIndex, C64, C64, C64);

fn power_fourier_parts(lambda: &MultiIndex, n: usize) -> Result<PowerParts> {
    let m = lambda.len();
    if m == 0 || m > n {
        return Err(dims("power-function identity needs 1 <= m <= n"));
    }
    require_strip(lambda, |j| j as f64 - n as f64 - 1.0, |j| j as f64 - m as f64, "power-function identity")?;
    let lam_star = reverse_index(lambda);
    let mu = (-&lam_star).shift_real(-(n as f64));
    let nm = (n * m) as f64;
    let c = ((nm + lambda.total()) * core::f64::consts::LN_2 + nm / 2.0 * PI.ln()).exp();
    let g_star = finite(gamma_cone(&-&lam_star), "Γ_Ω(-λ_*)")?;
    let g_n = finite(gamma_cone(&lambda.shift_real(n as f64)), "Γ_Ω(λ + n_0)")?;
    Ok((lam_star, mu, c, g_star, g_n))
}

/// `Γ_Ω(-λ_*) ∫ (y'y)^λ Fφ(y) dy = c_λ Γ_Ω(λ + n_0) ∫ (x'x)_*^{-λ_*-n_0} φ(x) dx`
/// with `c_λ = 2^{nm+|λ|} π^{nm/2}`, inside `j - n - 1 < Re λ_j < j - m`.
/// Both sides are estimated by Monte Carlo; closed forms are attached.
pub fn power_fourier_residual(
    lambda: &MultiIndex,
    n: usize,
    phi: &GaussianSchwartz,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<IdentityReport> {
    let (_, mu, c, g_star, g_n) = power_fourier_parts(lambda, n)?;
    let m = lambda.len();
    let dual = phi.dual();
    let proposal = dual.proposal(n, lambda, false);
    let lhs = estimate_mean(config, exec, &|rng: &mut Rng| {
        let draw = proposal.sample(n, m, rng)?;
        let (_, t) = draw.factor()?;
        let power = composite_power(&PosDefMatrix::from_upper(&t)?, lambda);
        Ok(power * (phi.fourier(&draw.x) * draw.weight))
    })?
    .scale(g_star);
    let rhs = zeta_star(phi, &mu, &super::One, n, &config.derive(1), exec)?.scale(c * g_n);
    let (l, r) = power_fourier_closed_forms(lambda, n, phi)?;
    Ok(IdentityReport {
        lhs,
        rhs,
        lhs_closed: Some(l),
        rhs_closed: Some(r),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeckeReport {
    pub estimate: McEstimate,
    /// `i^{km} P(y) e^{-π tr(y'y)}`.
    pub expected: C64,
}

impl HeckeReport {
    pub fn comparison(&self, label: &str) -> Comparison {
        Comparison::estimate_vs_value(label, &self.estimate, self.expected)
    }
}

/// `∫ P(x) e^{-π tr(x'x)} e^{2πi tr(y'x)} dx = i^{km} P(y) e^{-π tr(y'y)}`.
pub fn hecke_identity_residual(
    p: &HPolynomial,
    y: &Matrix,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<HeckeReport> {
    let (n, m) = (p.n(), p.m());
    if (y.rows(), y.cols()) != (n, m) {
        return Err(dims("y must have the shape of the polynomial's argument"));
    }
    // Unit-mass density e^{-π|x|^2}; the weight cancels it exactly.
    let proposal = GaussianProposal::with_scale(2.0 * PI);
    let estimate = estimate_mean(config, exec, &|rng: &mut Rng| {
        let draw = proposal.sample(n, m, rng)?;
        let phase = C64::new(0.0, 2.0 * PI * y.dot(&draw.x)).exp();
        let gauss = (-PI * draw.x.dot(&draw.x)).exp();
        Ok(p.eval(&draw.x) * phase * (gauss * draw.weight))
    })?;
    let expected = i_pow(p.degree() as u64 * m as u64) * p.eval(y) * (-PI * y.dot(y)).exp();
    Ok(HeckeReport { estimate, expected })
}
