//! Monte Carlo checks of the cosine transform: the average identity, the
//! eigenvalue relation on H-polynomials, annihilation, the injectivity
//! classifier and duality with the complementary Grassmannian.

use compcos_core::geometry::sample_stiefel;
use compcos_core::special::{
    average_closed_form, gamma_complex, injectivity_classify, multiplier_constant, multiplier_mu, stiefel_volume,
};
use compcos_core::transforms::{
    annihilation_check, cosine_transform, det_cosine_transform, eigen_relation_check, perp_duality_check,
    HPolynomial, One, ProjectorFunction,
};
use compcos_core::{Comparison, MultiIndex, C64};

use super::{Cases, SuiteContext};

const FRAMES: usize = 5;
const EXACT_TOLERANCE: f64 = 1e-10;

fn nan() -> C64 {
    C64::new(f64::NAN, 0.0)
}

fn label(n: usize, lambda: &MultiIndex) -> String {
    let parts: Vec<String> = lambda.re().iter().map(|x| x.to_string()).collect();
    format!("n={n},lambda=({})", parts.join(","))
}

/// `∫ (u'vv'u)^λ dv` at a random frame against its closed form.
pub fn average(ctx: &SuiteContext, cases: &mut Cases) {
    let grid: [(usize, &[f64]); 4] = [(4, &[1.0, 1.0]), (4, &[2.0, 0.5]), (4, &[0.5, -0.5]), (5, &[1.0, 1.0])];
    for (i, (n, l)) in grid.into_iter().enumerate() {
        let lambda = MultiIndex::real(l);
        let name = format!("average/{}", label(n, &lambda));
        let u = match cases.check(&name, sample_stiefel(n, lambda.len(), &mut ctx.rng(400 + i as u64))) {
            Some(u) => u,
            None => continue,
        };
        let est = cosine_transform(&One, &lambda, &u, &ctx.mc(410 + i as u64), ctx.exec, false);
        if let Some(est) = cases.check(&name, est) {
            let closed = average_closed_form(&lambda, n).finite().unwrap_or_else(nan);
            cases.push(Comparison::estimate_vs_value(name, &est, closed));
        }
    }

    // For constant λ the kernel is |det(v'u)|^λ; evaluate it that way too.
    let (n, m) = (4, 2);
    let name = "average/determinant_kernel/n=4,lambda=1";
    if let Some(u) = cases.check(name, sample_stiefel(n, m, &mut ctx.rng(420))) {
        let est = det_cosine_transform(&One, C64::new(1.0, 0.0), &u, &ctx.mc(421), ctx.exec, false);
        if let Some(est) = cases.check(name, est) {
            let closed = average_closed_form(&MultiIndex::real(&[1.0, 1.0]), n).finite().unwrap_or_else(nan);
            cases.push(Comparison::estimate_vs_value(name, &est, closed));
        }
    }

    // λ = 0 gives the total mass of the Stiefel manifold.
    for (n, m) in [(4usize, 2usize), (5, 2), (5, 3)] {
        let closed = average_closed_form(&MultiIndex::zeros(m), n).finite().unwrap_or_else(nan);
        let volume = stiefel_volume(n, m).map(C64::from).unwrap_or_else(|_| nan());
        cases.push(Comparison::relative(format!("average/zero_index_is_volume/n={n},m={m}"), closed, volume, EXACT_TOLERANCE));
    }
}

/// Rank-one multiplier from scalar gamma functions.
fn rank_one_multiplier(lambda: f64, k: u32, n: usize) -> C64 {
    let g = |x: f64| gamma_complex(C64::new(x, 0.0)).unwrap_or_else(|_| nan());
    let (k, n) = (k as f64, n as f64);
    g((lambda + 1.0) / 2.0) * g((k - lambda) / 2.0) / (g(-lambda / 2.0) * g((lambda + k + n) / 2.0))
}

/// `T^λ P_k = c μ_k(λ) P_k`, checked as frame-wise Rayleigh quotients.
pub fn eigen(ctx: &SuiteContext, cases: &mut Cases) {
    eigen_sphere(ctx, cases);
    eigen_grassmann(ctx, cases);
}

/// The rank-one case, including the null at `λ = 0`.
pub fn eigen_sphere(ctx: &SuiteContext, cases: &mut Cases) {
    // Sphere: n = 3, m = 1, a degree-2 harmonic. The eigenvalue is also
    // built directly as 2π^{(n-1)/2} (-1)^{k/2} μ_k.
    let sphere = HPolynomial::new(3, 1, 2);
    if let Some(p) = cases.check("sphere", sphere) {
        for (i, l) in [0.5, 1.0, 3.0].into_iter().enumerate() {
            let lambda = MultiIndex::real(&[l]);
            let name = format!("sphere/lambda={l}");
            let report = eigen_relation_check(&p, &lambda, FRAMES, &ctx.mc(500 + i as u64), ctx.exec);
            if let Some(report) = cases.check(&name, report) {
                let scalar = -2.0 * std::f64::consts::PI * rank_one_multiplier(l, 2, 3);
                cases.push(Comparison::relative(format!("{name}/eigenvalue_formula"), report.expected, scalar, EXACT_TOLERANCE));
                cases.extend(report.comparisons(&name));
            }
        }
        let report = annihilation_check(&p, &MultiIndex::real(&[0.0]), FRAMES, &ctx.mc(505), ctx.exec);
        if let Some(report) = cases.check("sphere/lambda=0", report) {
            cases.extend(report.comparisons("sphere/lambda=0"));
        }
    }
}

/// Degree 2 on `G_{4,2}` and `G_{5,2}`, and degree 0 in closed form.
pub fn eigen_grassmann(ctx: &SuiteContext, cases: &mut Cases) {
    let grid: [(usize, &[f64]); 4] = [(4, &[1.0, 1.0]), (4, &[1.5, 0.5]), (5, &[1.0, 1.0]), (5, &[1.5, 0.5])];
    for (i, (n, l)) in grid.into_iter().enumerate() {
        let lambda = MultiIndex::real(l);
        let name = format!("grassmann/k=2/{}", label(n, &lambda));
        let Some(p) = cases.check(&name, HPolynomial::new(n, 2, 2)) else { continue };
        let report = eigen_relation_check(&p, &lambda, FRAMES, &ctx.mc(510 + i as u64), ctx.exec);
        if let Some(report) = cases.check(&name, report) {
            cases.extend(report.comparisons(&name));
        }
    }

    // Degree zero: c μ_0(λ) is the average.
    for (n, l) in [(4usize, [1.0, 1.0]), (5, [1.5, 0.5])] {
        let lambda = MultiIndex::real(&l);
        let mu = multiplier_mu(&lambda, 0, n).finite().unwrap_or_else(nan);
        let average = average_closed_form(&lambda, n).finite().unwrap_or_else(nan);
        cases.push(Comparison::relative(
            format!("degree_zero_is_average/{}", label(n, &lambda)),
            multiplier_constant(n, 2, 0) * mu,
            average,
            EXACT_TOLERANCE,
        ));
    }
}

/// Vanishing multipliers kill the corresponding H-polynomials, and the
/// classifier agrees with the rank rule on a grid of constant indices.
pub fn annihilate(ctx: &SuiteContext, cases: &mut Cases) {
    annihilation(ctx, cases);
    classifier_table(cases);
}

pub fn annihilation(ctx: &SuiteContext, cases: &mut Cases) {
    let grid: [(&[f64], u32); 2] = [(&[1.0, 0.0], 2), (&[1.0, 1.0], 4)];
    for (i, (l, k)) in grid.into_iter().enumerate() {
        let lambda = MultiIndex::real(l);
        let name = format!("k={k}/{}", label(4, &lambda));
        let Some(p) = cases.check(&name, HPolynomial::new(4, 2, k)) else { continue };
        let report = annihilation_check(&p, &lambda, FRAMES, &ctx.mc(600 + i as u64), ctx.exec);
        if let Some(report) = cases.check(&name, report) {
            cases.extend(report.comparisons(&name));
        }
    }
}

pub fn classifier_table(cases: &mut Cases) {
    for (n, m) in [(3usize, 1usize), (4, 2), (5, 2), (4, 1)] {
        for l in [0.0, 0.5, 1.0, 2.0, 3.0] {
            let name = format!("classifier/n={n},m={m},lambda={l}");
            let expected = rank_rule(n, m, l);
            let verdict = injectivity_classify(&MultiIndex::constant_real(l, m), n);
            if let Some(v) = cases.check(&name, verdict) {
                cases.push(Comparison::condition(name, v.injective() == Some(expected)));
            }
        }
    }
}

/// Injectivity for constant `λ >= 0`: rank one fails at even integers,
/// higher rank at every integer.
fn rank_rule(n: usize, m: usize, lambda: f64) -> bool {
    let integer = lambda.fract() == 0.0;
    if m.min(n - m) == 1 {
        !(integer && (lambda as u64) % 2 == 0)
    } else {
        !integer
    }
}

/// Mass-normalised transforms on `G_{n,m}` and `G_{n,n-m}` agree.
pub fn perp(ctx: &SuiteContext, cases: &mut Cases) {
    let lambda = C64::new(1.0, 0.0);
    let functions: [(&str, fn() -> ProjectorFunction); 2] = [
        ("one", || ProjectorFunction::new(|_| C64::new(1.0, 0.0))),
        ("p00", || ProjectorFunction::diagonal_entry(0)),
    ];
    for (i, (n, m)) in [(4usize, 1usize), (5, 2)].into_iter().enumerate() {
        for (j, (fname, make)) in functions.iter().enumerate() {
            let tag = 700 + 10 * i as u64 + j as u64;
            let name = format!("n={n},m={m}/{fname}");
            let Some(u) = cases.check(&name, sample_stiefel(n, m, &mut ctx.rng(tag))) else { continue };
            let report = perp_duality_check(&make(), lambda, &u, &ctx.mc(tag), ctx.exec);
            if let Some(report) = cases.check(&name, report) {
                cases.push(report.comparison(&name));
            }
        }
    }

    // For f ≡ 1 both sides are normalised averages.
    for (n, m) in [(4usize, 1usize), (5, 2)] {
        let normalised = |m: usize| {
            let avg = average_closed_form(&MultiIndex::constant_real(1.0, m), n).finite().unwrap_or_else(nan);
            avg / stiefel_volume(n, m).unwrap_or(f64::NAN)
        };
        cases.push(Comparison::relative(
            format!("closed_form/n={n},m={m}"),
            normalised(m),
            normalised(n - m),
            EXACT_TOLERANCE,
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_rule_table() {
        assert!(rank_rule(3, 1, 1.0) && !rank_rule(3, 1, 2.0) && rank_rule(4, 1, 3.0));
        assert!(!rank_rule(4, 2, 1.0) && rank_rule(5, 2, 0.5) && !rank_rule(5, 2, 0.0));
    }
}
