use compcos_core::geometry::{sample_stiefel, sample_stiefel_stream};
use compcos_core::mc::estimate_mean;
use compcos_core::special::{average_closed_form, injectivity_classify, multiplier_mu, Injectivity};
use compcos_core::transforms::{cosine_transform, One};
use compcos_core::{Comparison, McConfig, MultiIndex, RngStream, Sequential, C64};

#[test]
fn frames_are_reproducible_and_orthonormal() {
    let stream = RngStream::new(42, 3).derive(9);
    let a = sample_stiefel_stream(5, 2, &stream).unwrap();
    let b = sample_stiefel_stream(5, 2, &stream).unwrap();
    assert_eq!(a.matrix(), b.matrix());
    assert!(a.matrix().orthonormality_defect() < 1e-12);
    let c = sample_stiefel_stream(5, 2, &RngStream::new(43, 3).derive(9)).unwrap();
    assert_ne!(a.matrix(), c.matrix());
}

#[test]
fn haar_entries_have_the_uniform_second_moment() {
    // On V_{n,m} every entry squared averages to 1/n.
    let (n, m) = (5, 2);
    let config = McConfig::new(11, 40_000, 4);
    let est = estimate_mean(&config, &Sequential, &|rng| {
        let v = sample_stiefel(n, m, rng)?;
        Ok(C64::new(v.matrix()[(n - 1, m - 1)].powi(2), 0.0))
    })
    .unwrap();
    let c = Comparison::estimate_vs_value("entry_moment", &est, C64::new(1.0 / n as f64, 0.0));
    assert!(c.holds_at(5.0), "{c:?}");
}

#[test]
fn averaging_one_reproduces_the_closed_form() {
    let lambda = MultiIndex::real(&[1.0, 1.0]);
    let u = sample_stiefel(4, 2, &mut RngStream::new(5, 0).rng()).unwrap();
    let est = cosine_transform(&One, &lambda, &u, &McConfig::new(6, 100_000, 4), &Sequential, false).unwrap();
    // E|det(u'v)| = 1/3 on V_{4,2}, whose mass is 8π^3.
    let exact = 8.0 * std::f64::consts::PI.powi(3) / 3.0;
    assert!((average_closed_form(&lambda, 4).finite().unwrap().re - exact).abs() < 1e-10 * exact);
    let c = Comparison::estimate_vs_value("average", &est, C64::new(exact, 0.0));
    assert!(c.holds_at(5.0), "{c:?}");
}

#[test]
fn a_vanishing_multiplier_rules_out_injectivity() {
    for (n, m) in [(3usize, 1usize), (4, 1), (4, 2), (5, 2), (6, 3)] {
        for step in 0..16 {
            let l = -0.5 + 0.25 * step as f64;
            let lambda = MultiIndex::constant_real(l, m);
            let verdict = injectivity_classify(&lambda, n).unwrap();
            if (0..=8).any(|k| multiplier_mu(&lambda, k, n).is_zero()) {
                assert_ne!(verdict.status, Injectivity::Injective, "n={n} m={m} lambda={l}");
            }
        }
    }
}
