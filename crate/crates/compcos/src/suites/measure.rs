//! Polar and triangular coordinates on `R^{n x m}` against direct
//! matrix-space Monte Carlo, Haar invariance and Haar moments.

use std::f64::consts::PI;

use compcos_core::geometry::{
    integrate_matrix_gaussian, integrate_polar_coordinates, integrate_stiefel, integrate_triangular_coordinates,
    sample_orthogonal, GaussianProposal, InnerRule,
};
use compcos_core::mc::{estimate_mean, Rng};
use compcos_core::geometry::sample_stiefel;
use compcos_core::{Comparison, Matrix, StiefelFrame, C64};

use super::{Cases, SuiteContext};

/// Direct draws per frame of the coordinate estimators, whose frames each
/// cost a full inner Gauss rule.
const DRAWS_PER_FRAME: u64 = 50;

/// `(1 + x_11^2 + x_12 x_21) e^{-|x|^2/2}`: Gaussian decay, not invariant
/// under either rotation, integral `2 (2π)^{nm/2}`.
fn test_function(x: &Matrix) -> C64 {
    let p = 1.0 + x[(0, 0)].powi(2) + x[(0, 1)] * x[(1, 0)];
    C64::new(p * (-0.5 * x.dot(x)).exp(), 0.0)
}

pub fn measure(ctx: &SuiteContext, cases: &mut Cases) {
    let (n, m) = (4, 2);
    let exact = C64::new(2.0 * (2.0 * PI).powf((n * m) as f64 / 2.0), 0.0);
    let direct = integrate_matrix_gaussian(&|x| Ok(test_function(x)), n, m, &GaussianProposal::standard(), &ctx.mc(300), ctx.exec);
    let Some(direct) = cases.check("direct", direct) else { return };
    cases.push(Comparison::estimate_vs_value("direct_vs_closed_form", &direct, exact));

    let frames = ctx.mc(301).with_samples((ctx.samples / DRAWS_PER_FRAME).max(1));
    let polar = integrate_polar_coordinates(&test_function, n, m, InnerRule::default(), &frames, ctx.exec);
    if let Some(polar) = cases.check("polar", polar) {
        cases.push(Comparison::estimates("polar_vs_direct", &polar, &direct));
    }
    let frames = ctx.mc(302).with_samples((ctx.samples / DRAWS_PER_FRAME).max(1));
    let triangular = integrate_triangular_coordinates(&test_function, n, m, InnerRule::default(), &frames, ctx.exec);
    if let Some(triangular) = cases.check("triangular", triangular) {
        cases.push(Comparison::estimates("triangular_vs_direct", &triangular, &direct));
    }

    haar_invariance(ctx, cases);
    haar_moments(ctx, cases);
}

fn haar_invariance(ctx: &SuiteContext, cases: &mut Cases) {
    let (n, m) = (4, 2);
    let gamma = sample_orthogonal(n, &mut ctx.rng(310));
    let integrands: [(&str, fn(&Matrix) -> f64); 3] = [
        ("v11_squared", |v| v[(0, 0)].powi(2)),
        ("cross_term", |v| v[(0, 0)] * v[(1, 1)] + v[(2, 1)].powi(2)),
        ("quartic", |v| (v[(0, 0)] + v[(3, 1)]).powi(4)),
    ];
    for (i, (name, f)) in integrands.iter().enumerate() {
        let plain = integrate_stiefel(&|v: &StiefelFrame| Ok(f(v.matrix()).into()), n, m, &ctx.mc(311 + 2 * i as u64), ctx.exec);
        let rotated = integrate_stiefel(
            &|v: &StiefelFrame| Ok(f(&gamma.matmul(v.matrix())).into()),
            n,
            m,
            &ctx.mc(312 + 2 * i as u64),
            ctx.exec,
        );
        let label = format!("haar_invariance/{name}");
        if let (Some(a), Some(b)) = (cases.check(&label, plain), cases.check(&label, rotated)) {
            cases.push(Comparison::estimates(label, &a, &b));
        }
    }
}

fn haar_moments(ctx: &SuiteContext, cases: &mut Cases) {
    // E[v_11^2] = 1/n by symmetry of E[vv'] = (m/n) I.
    for (i, (n, m)) in [(3usize, 1usize), (4, 2)].into_iter().enumerate() {
        let est = estimate_mean(&ctx.mc(320 + i as u64), ctx.exec, &|rng: &mut Rng| {
            Ok(sample_stiefel(n, m, rng)?.matrix()[(0, 0)].powi(2).into())
        });
        let label = format!("haar_moment/n={n},m={m}");
        if let Some(est) = cases.check(&label, est) {
            cases.push(Comparison::estimate_vs_value(label, &est, C64::new(1.0 / n as f64, 0.0)));
        }
    }
}
