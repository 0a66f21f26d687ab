//! Exact checks on the cone: composite-power identities, gamma functions,
//! volumes and the Laplace transform of composite powers.

use compcos_core::cone::{composite_power, composite_power_by_minors, reverse_matrix};
use compcos_core::geometry::{gaussian_matrix, integrate_cone, standard_normal, ConeMeasure};
use compcos_core::linalg::{determinant, inverse};
use compcos_core::mc::Rng;
use compcos_core::quadrature::DeRule;
use compcos_core::special::{
    gamma_complex, gamma_cone, multiplier_mu, siegel_gamma, stiefel_volume, stiefel_volume_by_spheres,
};
use compcos_core::{Comparison, Matrix, MultiIndex, PosDefMatrix, Result, C64};

use super::{worst, Cases, SuiteContext};

const INSTANCES: usize = 200;
const CONE_TOLERANCE: f64 = 1e-10;
const GAMMA_TOLERANCE: f64 = 1e-12;
const QUADRATURE_TOLERANCE: f64 = 1e-6;

fn random_index(m: usize, rng: &mut Rng) -> MultiIndex {
    MultiIndex::new(
        (0..m)
            .map(|_| C64::new(1.5 * standard_normal(rng), 0.5 * standard_normal(rng)))
            .collect(),
    )
}

fn random_cone_point(m: usize, rng: &mut Rng) -> Result<PosDefMatrix> {
    PosDefMatrix::new(gaussian_matrix(m + 3, m, rng).gram())
}

fn random_triangular(m: usize, rng: &mut Rng) -> Matrix {
    let mut t = Matrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = (0.4 * standard_normal(rng)).exp();
        for j in i + 1..m {
            t[(i, j)] = standard_normal(rng);
        }
    }
    t
}

type Identity = fn(&PosDefMatrix, &MultiIndex, &mut Rng) -> Result<(C64, C64)>;

fn multiplicativity(r: &PosDefMatrix, lambda: &MultiIndex, rng: &mut Rng) -> Result<(C64, C64)> {
    let mu = random_index(lambda.len(), rng);
    Ok((composite_power(r, &(lambda + &mu)), composite_power(r, lambda) * composite_power(r, &mu)))
}

fn shift(r: &PosDefMatrix, lambda: &MultiIndex, rng: &mut Rng) -> Result<(C64, C64)> {
    let alpha = C64::new(standard_normal(rng), 0.5 * standard_normal(rng));
    // |r|^{α/2} from an LU determinant, independent of the Cholesky factor.
    let det_power = (alpha * 0.5 * determinant(r.entries()).ln()).exp();
    Ok((composite_power(r, &lambda.shift(alpha)), composite_power(r, lambda) * det_power))
}

fn triangular_covariance(r: &PosDefMatrix, lambda: &MultiIndex, rng: &mut Rng) -> Result<(C64, C64)> {
    let t = random_triangular(lambda.len(), rng);
    let trt = symmetric(t.transpose().matmul(r.entries()).matmul(&t));
    let lhs = composite_power(&PosDefMatrix::new(trt)?, lambda);
    let rhs = composite_power(&PosDefMatrix::new(t.gram())?, lambda) * composite_power(r, lambda);
    Ok((lhs, rhs))
}

fn symmetric(a: Matrix) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
}

/// `r^{λ_*} = ((r^{-1})_*)^{-λ}`.
fn reversal_of_inverse(r: &PosDefMatrix, lambda: &MultiIndex, _: &mut Rng) -> Result<(C64, C64)> {
    let inv_rev = PosDefMatrix::new(symmetric(reverse_matrix(&inverse(r.entries())?)))?;
    Ok((composite_power(r, &lambda.reversed()), composite_power(&inv_rev, &-lambda)))
}

/// `(r^{-1})^λ = (r_*)^{-λ_*}`.
fn inverse_of_reversal(r: &PosDefMatrix, lambda: &MultiIndex, _: &mut Rng) -> Result<(C64, C64)> {
    let inv = PosDefMatrix::new(symmetric(inverse(r.entries())?))?;
    let rev = PosDefMatrix::new(reverse_matrix(r.entries()))?;
    Ok((composite_power(&inv, lambda), composite_power(&rev, &-&lambda.reversed())))
}

fn minor_path(r: &PosDefMatrix, lambda: &MultiIndex, _: &mut Rng) -> Result<(C64, C64)> {
    Ok((composite_power_by_minors(r.entries(), lambda)?, composite_power(r, lambda)))
}

/// Composite-power identities on random `(r, λ, μ)`, `m = 1..4`. Each case
/// reports the worst of its instances.
pub fn cone(ctx: &SuiteContext, cases: &mut Cases) {
    let identities: [(&str, Identity); 6] = [
        ("multiplicativity", multiplicativity),
        ("shift", shift),
        ("triangular_covariance", triangular_covariance),
        ("reversal_of_inverse", reversal_of_inverse),
        ("inverse_of_reversal", inverse_of_reversal),
        ("minor_path", minor_path),
    ];
    for (i, (name, identity)) in identities.iter().enumerate() {
        for m in 1..=4usize {
            let label = format!("{name}/m={m}");
            let mut rng = ctx.rng(100 + 10 * i as u64 + m as u64);
            let run = (0..INSTANCES)
                .map(|_| {
                    let r = random_cone_point(m, &mut rng)?;
                    let lambda = random_index(m, &mut rng);
                    let (lhs, rhs) = identity(&r, &lambda, &mut rng)?;
                    Ok(Comparison::relative(label.clone(), lhs, rhs, CONE_TOLERANCE))
                })
                .collect::<Result<Vec<_>>>();
            if let Some(all) = cases.check(&label, run) {
                cases.extend(worst(all));
            }
        }
    }
}

/// Cone and Siegel gammas, the two volume formulas, the Laplace identity by
/// cone quadrature, and the rank-one multiplier.
pub fn gamma(ctx: &SuiteContext, cases: &mut Cases) {
    // Γ_Ω(λ_0) = Γ_m(λ/2) on random points.
    let mut rng = ctx.rng(200);
    let constant = (0..50).map(|i| {
        let m = 1 + i % 4;
        let l = C64::new(m as f64 + 3.0 * standard_normal(&mut rng).abs(), standard_normal(&mut rng));
        let a = gamma_cone(&MultiIndex::constant(l, m)).finite();
        let b = siegel_gamma(l * 0.5, m).finite();
        let nan = C64::new(f64::NAN, 0.0);
        Comparison::relative("cone_gamma_of_constant_index", a.unwrap_or(nan), b.unwrap_or(nan), GAMMA_TOLERANCE)
    });
    cases.extend(worst(constant));

    let volumes = (1..=10usize).flat_map(|n| (1..=n).map(move |m| (n, m))).map(|(n, m)| {
        let a = stiefel_volume(n, m).unwrap_or(f64::NAN);
        let b = stiefel_volume_by_spheres(n, m).unwrap_or(f64::NAN);
        Comparison::relative(format!("stiefel_volume/n={n},m={m}"), a.into(), b.into(), GAMMA_TOLERANCE)
    });
    cases.extend(worst(volumes));

    // ∫_Ω r^λ e^{-tr(rs)} d_*r = Γ_Ω(λ) (s_*)^{-λ_*} at m = 2.
    let mut rng = ctx.rng(201);
    let rule = DeRule::default();
    for i in 0..5 {
        let label = format!("laplace/{i}");
        let g = gaussian_matrix(2, 2, &mut rng);
        let s = g.gram().scale(0.5).add(&Matrix::identity(2).scale(0.5));
        let lambda = MultiIndex::new(vec![
            C64::new(1.5 + 0.5 * standard_normal(&mut rng).abs(), 0.3 * standard_normal(&mut rng)),
            C64::new(2.5 + 0.5 * standard_normal(&mut rng).abs(), 0.3 * standard_normal(&mut rng)),
        ]);
        let quad = integrate_cone(
            |r| composite_power(r, &lambda) * (-r.entries().matmul(&s).trace()).exp(),
            2,
            ConeMeasure::Invariant,
            &rule,
        );
        let closed = PosDefMatrix::new(reverse_matrix(&s)).map(|s_rev| {
            gamma_cone(&lambda).finite().unwrap_or(C64::new(f64::NAN, 0.0))
                * composite_power(&s_rev, &-&lambda.reversed())
        });
        if let (Some(q), Some(c)) = (cases.check(&label, quad), cases.check(&label, closed)) {
            cases.push(Comparison::relative(label, q, c, QUADRATURE_TOLERANCE));
        }
    }

    // m = 1: μ_k(λ) = Γ((λ+1)/2) Γ((k-λ)/2) / (Γ(-λ/2) Γ((λ+k+n)/2)).
    let rank_one = [3usize, 5].into_iter().flat_map(|n| {
        (0..20).flat_map(move |i| {
            let l = -0.9 + 0.37 * i as f64;
            (0..5u32).map(move |h| {
                let k = 2 * h;
                let g = |x: f64| gamma_complex(C64::new(x, 0.0)).unwrap_or(C64::new(f64::NAN, 0.0));
                let kf = k as f64;
                let want = g((l + 1.0) / 2.0) * g((kf - l) / 2.0) / (g(-l / 2.0) * g((l + kf + n as f64) / 2.0));
                let got = multiplier_mu(&MultiIndex::real(&[l]), k, n).finite();
                Comparison::relative("rank_one_multiplier", got.unwrap_or(C64::new(f64::NAN, 0.0)), want, GAMMA_TOLERANCE)
            })
        })
    });
    cases.extend(worst(rank_one));
    cases.push(Comparison::condition(
        "rank_one_multiplier_zero_at_origin",
        multiplier_mu(&MultiIndex::real(&[0.0]), 2, 3).is_zero(),
    ));
}

#[cfg(test)]
mod tests {
    use super::*;
    use compcos_core::Sequential;

    #[test]
    fn exact_suites_pass() {
        let ctx = SuiteContext { seed: 42, samples: 0, partitions: 1, exec: &Sequential };
        for suite in [cone as fn(&SuiteContext, &mut Cases), gamma] {
            let mut cases = Cases::default();
            suite(&ctx, &mut cases);
            let v = cases.into_vec();
            assert!(!v.is_empty());
            for c in &v {
                assert!(c.pass, "{c:?}");
            }
        }
    }
}
