//! Projection-slice theorem, gauge independence of the slice and the
//! closed-form Radon transform against Monte Carlo over the plane.

use compcos_core::geometry::{gaussian_matrix, sample_stiefel, standard_normal};
use compcos_core::mc::Rng;
use compcos_core::radon::{
    projection_slice_residual, radon_gaussian, radon_monte_carlo, radon_slice, random_gauge, GaussianComponent,
    GaussianMixture, MatrixPlane,
};
use compcos_core::{Comparison, Result, C64};

use super::{Cases, SuiteContext};

const PLANES: usize = 10;
const GAUGE_TOLERANCE: f64 = 1e-12;

/// Three shifted, differently scaled Gaussians on `R^{n x m}`.
fn mixture(n: usize, m: usize, rng: &mut Rng) -> Result<GaussianMixture> {
    let components = (0..3)
        .map(|_| GaussianComponent {
            weight: 0.5 + standard_normal(rng).abs(),
            center: gaussian_matrix(n, m, rng).scale(0.7),
            scale: (0.5 * standard_normal(rng)).exp(),
        })
        .collect();
    GaussianMixture::new(components)
}

pub fn radon(ctx: &SuiteContext, cases: &mut Cases) {
    let m = 2;
    for (i, (n, k)) in [(5usize, 3usize), (4, 3)].into_iter().enumerate() {
        let shape = format!("n={n},k={k},m={m}");
        let mut rng = ctx.rng(1100 + i as u64);
        let Some(f) = cases.check(&shape, mixture(n, m, &mut rng)) else { continue };
        for j in 0..PLANES {
            let name = format!("projection_slice/{shape}/{j}");
            let c = sample_stiefel(n, k, &mut rng).and_then(|xi| {
                let b = gaussian_matrix(k, m, &mut rng).scale(0.8);
                projection_slice_residual(&f, &xi, &b)
            });
            if let Some(mut c) = cases.check(&name, c) {
                c.name = name;
                cases.push(c);
            }
        }

        // The slice must not depend on how the complement of ξ is framed.
        let name = format!("gauge_independence/{shape}");
        let slices = sample_stiefel(n, k, &mut rng).and_then(|xi| {
            let gauge = random_gauge(n, k, &mut rng);
            Ok((radon_slice(&f, &xi, None)?, radon_slice(&f, &xi, Some(&gauge))?))
        });
        if let Some((plain, gauged)) = cases.check(&name, slices) {
            let t = gaussian_matrix(k, m, &mut rng).scale(0.5);
            cases.push(Comparison::relative(name, plain.eval(&t).into(), gauged.eval(&t).into(), GAUGE_TOLERANCE));
        }
    }

    let (n, k) = (4, 3);
    let name = "monte_carlo/n=4,k=3,m=2";
    let mut rng = ctx.rng(1110);
    let setup = mixture(n, m, &mut rng).and_then(|f| {
        let plane = MatrixPlane::new(sample_stiefel(n, k, &mut rng)?, gaussian_matrix(k, m, &mut rng).scale(0.5))?;
        let exact = radon_gaussian(&f, &plane)?;
        Ok((f, plane, exact))
    });
    if let Some((f, plane, exact)) = cases.check(name, setup) {
        if let Some(est) = cases.check(name, radon_monte_carlo(&f, &plane, &ctx.mc(1111), ctx.exec)) {
            cases.push(Comparison::estimate_vs_value(name, &est, C64::new(exact, 0.0)));
        }
    }
}
