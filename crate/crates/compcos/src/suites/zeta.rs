//! Zeta integrals, the functional equation, the Fourier transform of
//! composite powers and the Hecke identity for H-polynomials.

use std::f64::consts::PI;

use compcos_core::geometry::gaussian_matrix;
use compcos_core::transforms::zeta::{power_fourier_closed_forms, power_fourier_residual};
use compcos_core::transforms::{
    functional_equation_residual, hecke_identity_residual, zeta_closed_form, zeta_integral, zeta_star,
    AngleFunction, GaussianSchwartz, HPolynomial, One, ProjectorFunction,
};
use compcos_core::{Comparison, MultiIndex, C64};

use super::{Cases, SuiteContext};

const EXACT_TOLERANCE: f64 = 1e-8;

pub fn zeta(ctx: &SuiteContext, cases: &mut Cases) {
    zeta_closed_forms(ctx, cases);
    power_fourier(ctx, cases);
}

/// `Z(λ)` and `Z_*(λ)` for `f ≡ 1` against the closed form. A right
/// rotation of a Gaussian is a Gaussian, so both share it.
pub fn zeta_closed_forms(ctx: &SuiteContext, cases: &mut Cases) {
    let (n, phi) = (4, GaussianSchwartz::unit());
    let lambda = MultiIndex::real(&[2.0, 2.0]);
    let closed = zeta_closed_form(&phi, &lambda, n).map(|t| t.finite().unwrap_or(C64::new(f64::NAN, 0.0)));
    if let Some(closed) = cases.check("closed_form", closed) {
        for (i, (name, star)) in [("z", false), ("z_star", true)].into_iter().enumerate() {
            let run = if star { zeta_star } else { zeta_integral };
            let est = run(&phi, &lambda, &One, n, &ctx.mc(800 + i as u64), ctx.exec);
            if let Some(est) = cases.check(name, est) {
                cases.push(Comparison::estimate_vs_value(format!("{name}/n=4,lambda=(2,2)"), &est, closed));
            }
        }
    }

    // λ = 0 is the Gaussian mass (2π)^{nm/2}.
    let mass = zeta_closed_form(&phi, &MultiIndex::zeros(2), n).map(|t| t.finite().unwrap_or(C64::new(f64::NAN, 0.0)));
    if let Some(mass) = cases.check("closed_form_at_zero", mass) {
        cases.push(Comparison::relative("closed_form_at_zero", mass, C64::new((2.0 * PI).powi(4), 0.0), EXACT_TOLERANCE));
    }
}

/// The Fourier transform of a composite power, in closed form at rank one
/// and by Monte Carlo at `m = 2`.
pub fn power_fourier(ctx: &SuiteContext, cases: &mut Cases) {
    let phi = GaussianSchwartz::unit();

    // Rank one, λ = -2: both sides of the power-function identity reduce to
    // (2π)^n with the unit Gaussian.
    let pair = power_fourier_closed_forms(&MultiIndex::real(&[-2.0]), 3, &phi);
    if let Some((lhs, rhs)) = cases.check("power_fourier/n=3", pair) {
        let expected = C64::new((2.0 * PI).powi(3), 0.0);
        cases.push(Comparison::relative("power_fourier/n=3/lhs", lhs, expected, EXACT_TOLERANCE));
        cases.push(Comparison::relative("power_fourier/n=3/rhs", rhs, expected, EXACT_TOLERANCE));
    }

    let report = power_fourier_residual(&MultiIndex::real(&[-2.5, -1.5]), 4, &phi, &ctx.mc(810), ctx.exec);
    if let Some(report) = cases.check("power_fourier/n=4", report) {
        cases.extend(report.comparisons("power_fourier/n=4,lambda=(-2.5,-1.5)"));
    }
}

/// Both sides of the functional equation by Monte Carlo, plus their closed
/// forms when `f ≡ 1`.
pub fn functional(ctx: &SuiteContext, cases: &mut Cases) {
    let phi = GaussianSchwartz::unit();
    let diagonal = ProjectorFunction::diagonal_entry(0);
    let runs: [(&str, usize, &[f64], &dyn AngleFunction); 3] = [
        ("one/n=4,lambda=(-1.5,-0.5)", 4, &[-1.5, -0.5], &One),
        ("p00/n=4,lambda=(-1.5,-0.5)", 4, &[-1.5, -0.5], &diagonal),
        ("one/n=3,lambda=-0.5", 3, &[-0.5], &One),
    ];
    for (i, (name, n, l, f)) in runs.into_iter().enumerate() {
        let report = functional_equation_residual(&MultiIndex::real(l), f, &phi, n, &ctx.mc(900 + i as u64), ctx.exec);
        if let Some(report) = cases.check(name, report) {
            cases.extend(report.comparisons(name));
        }
    }
}

/// `∫ P(x) e^{2πi tr(y'x)} e^{-π|x|^2} dx = i^{km} P(y) e^{-π|y|^2}`.
pub fn hecke(ctx: &SuiteContext, cases: &mut Cases) {
    let (n, m) = (4, 2);
    for k in 0..=2u32 {
        let Some(p) = cases.check(&format!("k={k}"), HPolynomial::new(n, m, k)) else { continue };
        let mut rng = ctx.rng(1000 + k as u64);
        let points = if k == 0 { 1 } else { 3 };
        for j in 0..points {
            let y = gaussian_matrix(n, m, &mut rng).scale(0.5);
            let name = format!("k={k}/y{j}");
            let report = hecke_identity_residual(&p, &y, &ctx.mc(1010 + 10 * k as u64 + j as u64), ctx.exec);
            if let Some(report) = cases.check(&name, report) {
                cases.push(report.comparison(&name));
            }
        }
    }
}
