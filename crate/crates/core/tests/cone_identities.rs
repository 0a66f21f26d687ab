use compcos_core::cone::{composite_power, composite_power_by_minors};
use compcos_core::linalg::determinant;
use compcos_core::{Matrix, MultiIndex, PosDefMatrix, C64};
use proptest::prelude::*;

fn close(a: C64, b: C64) -> bool {
    (a - b).norm() <= 1e-9 * a.norm().max(b.norm()).max(1e-300)
}

fn cone_point(m: usize) -> impl Strategy<Value = PosDefMatrix> {
    proptest::collection::vec(-1.0f64..1.0, (m + 2) * m).prop_map(move |x| {
        let x = Matrix::from_row_major(m + 2, m, x).unwrap();
        // Adding the identity keeps the point well inside the cone.
        PosDefMatrix::new(x.gram().add(&Matrix::identity(m))).unwrap()
    })
}

fn index(m: usize) -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec((-2.0f64..2.0, -1.0f64..1.0), m)
        .prop_map(|v| MultiIndex::new(v.into_iter().map(|(re, im)| C64::new(re, im)).collect()))
}

fn case() -> impl Strategy<Value = (PosDefMatrix, MultiIndex, MultiIndex)> {
    (1usize..=4).prop_flat_map(|m| (cone_point(m), index(m), index(m)))
}

proptest! {
    #[test]
    fn powers_multiply((r, lambda, mu) in case()) {
        let lhs = composite_power(&r, &(&lambda + &mu));
        prop_assert!(close(lhs, composite_power(&r, &lambda) * composite_power(&r, &mu)));
    }

    #[test]
    fn a_constant_shift_multiplies_by_a_determinant_power((r, lambda, _) in case(), re in -2.0f64..2.0) {
        let alpha = C64::new(re, 0.3);
        let det = (alpha * 0.5 * determinant(r.entries()).ln()).exp();
        prop_assert!(close(composite_power(&r, &lambda.shift(alpha)), composite_power(&r, &lambda) * det));
    }

    #[test]
    fn minors_and_cholesky_agree((r, lambda, _) in case()) {
        let by_minors = composite_power_by_minors(r.entries(), &lambda).unwrap();
        prop_assert!(close(by_minors, composite_power(&r, &lambda)));
    }
}

#[test]
fn constant_index_is_a_determinant_power() {
    let r = PosDefMatrix::new(Matrix::from_rows(&[[2.0, 0.5, 0.1], [0.5, 1.0, 0.2], [0.1, 0.2, 3.0]])).unwrap();
    let det = determinant(r.entries());
    let power = composite_power(&r, &MultiIndex::constant_real(1.5, 3));
    assert!(close(power, C64::new(det.powf(0.75), 0.0)));
}
