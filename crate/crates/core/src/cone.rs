//! Algebra on the cone of positive definite symmetric matrices.
//!
//! Every `r` in the cone factors uniquely as `r = t't` with `t` upper
//! triangular and `t_jj > 0`. The composite power `r^λ` is the product of
//! principal-minor ratios `(Δ_i / Δ_{i-1})^{λ_i / 2}`, which equals
//! `∏ t_jj^{λ_j}`; it is evaluated in log space from the Cholesky diagonal.

// Float math for no_std builds; std builds resolve the inherent methods.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::ops::{Add, Index, Neg, Sub};


use crate::error::{dims, Error, Result};
use crate::linalg::{determinant, Matrix, PIVOT_FLOOR};
use crate::C64;

/// A vector `λ ∈ C^m` of exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiIndex(Vec<C64>);

impl MultiIndex {
    pub fn new(components: Vec<C64>) -> Self {
        MultiIndex(components)
    }

    pub fn real(components: &[f64]) -> Self {
        MultiIndex(components.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// The constant index `(λ, ..., λ)`.
    pub fn constant(value: C64, m: usize) -> Self {
        MultiIndex(alloc::vec![value; m])
    }

    pub fn constant_real(value: f64, m: usize) -> Self {
        Self::constant(C64::new(value, 0.0), m)
    }

    pub fn zeros(m: usize) -> Self {
        Self::constant_real(0.0, m)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[C64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &C64> {
        self.0.iter()
    }

    pub fn re(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.re).collect()
    }

    /// `λ + α_0` with `α_0 = (α, ..., α)`.
    pub fn shift(&self, alpha: C64) -> Self {
        MultiIndex(self.0.iter().map(|&z| z + alpha).collect())
    }

    pub fn shift_real(&self, alpha: f64) -> Self {
        self.shift(C64::new(alpha, 0.0))
    }

    /// `|λ| = λ_1 + ... + λ_m`.
    pub fn total(&self) -> C64 {
        self.0.iter().sum()
    }

    /// All components equal (exactly, or within `tol` in modulus).
    pub fn is_constant(&self, tol: f64) -> bool {
        self.0.windows(2).all(|w| (w[0] - w[1]).norm() <= tol)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.0.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn reversed(&self) -> Self {
        reverse_index(self)
    }
}

impl Index<usize> for MultiIndex {
    type Output = C64;

    fn index(&self, j: usize) -> &C64 {
        &self.0[j]
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), rhs.len());
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &MultiIndex {
    type Output = MultiIndex;

    fn sub(self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), rhs.len());
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &MultiIndex {
    type Output = MultiIndex;

    fn neg(self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|z| -z).collect())
    }
}

/// `λ_*`: components in reverse order.
pub fn reverse_index(lambda: &MultiIndex) -> MultiIndex {
    MultiIndex(lambda.0.iter().rev().copied().collect())
}

/// `r_* = ω r ω` with ω the anti-diagonal permutation.
pub fn reverse_matrix(r: &Matrix) -> Matrix {
    let (rows, cols) = (r.rows(), r.cols());
    Matrix::from_fn(rows, cols, |i, j| r[(rows - 1 - i, cols - 1 - j)])
}

/// Upper-triangular `t` with positive diagonal and `t't = r`.
pub fn cholesky_upper(r: &Matrix) -> Result<Matrix> {
    cholesky_upper_with_floor(r, PIVOT_FLOOR)
}

/// [`cholesky_upper`] with an explicit pivot floor.
pub fn cholesky_upper_with_floor(r: &Matrix, floor: f64) -> Result<Matrix> {
    if !r.is_square() {
        return Err(dims("Cholesky of a non-square matrix"));
    }
    let m = r.rows();
    let mut t = Matrix::zeros(m, m);
    for j in 0..m {
        let mut pivot = r[(j, j)];
        for k in 0..j {
            pivot -= t[(k, j)] * t[(k, j)];
        }
        if !(pivot > floor) {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let d = pivot.sqrt();
        t[(j, j)] = d;
        for i in (j + 1)..m {
            let mut s = r[(j, i)];
            for k in 0..j {
                s -= t[(k, j)] * t[(k, i)];
            }
            t[(j, i)] = s / d;
        }
    }
    Ok(t)
}

/// A point of the cone with its Cholesky factor and principal minors cached.
#[derive(Clone, Debug, PartialEq)]
pub struct PosDefMatrix {
    entries: Matrix,
    chol: Matrix,
    minors: Vec<f64>,
}

impl PosDefMatrix {
    /// Validates symmetry (relative 1e-12) and factorizes.
    pub fn new(entries: Matrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(dims("cone element must be square"));
        }
        let asym = entries.max_asymmetry();
        if asym > 1e-12 * entries.max_abs() {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let chol = cholesky_upper(&entries)?;
        let minors = minors_from_cholesky(&chol);
        Ok(PosDefMatrix {
            entries,
            chol,
            minors,
        })
    }

    /// Builds `t't` from an upper-triangular `t` with positive diagonal.
    pub fn from_upper(t: &Matrix) -> Result<Self> {
        let m = t.rows();
        if !t.is_square() {
            return Err(dims("triangular factor must be square"));
        }
        for j in 0..m {
            if !(t[(j, j)] > 0.0) {
                return Err(Error::NotPositiveDefinite {
                    index: j,
                    pivot: t[(j, j)],
                });
            }
        }
        let chol = Matrix::from_fn(m, m, |i, j| if j >= i { t[(i, j)] } else { 0.0 });
        let entries = chol.gram();
        let minors = minors_from_cholesky(&chol);
        Ok(PosDefMatrix {
            entries,
            chol,
            minors,
        })
    }

    pub fn identity(m: usize) -> Self {
        Self::from_upper(&Matrix::identity(m)).expect("identity is positive definite")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn chol(&self) -> &Matrix {
        &self.chol
    }

    pub fn minors(&self) -> &[f64] {
        &self.minors
    }

    pub fn det(&self) -> f64 {
        self.minors[self.minors.len() - 1]
    }

    pub fn reversed(&self) -> Result<Self> {
        Self::new(reverse_matrix(&self.entries))
    }

    pub fn inverse(&self) -> Result<Self> {
        // (t't)^{-1} = s s' with s = t^{-1} upper triangular.
        let m = self.dim();
        let mut s = Matrix::zeros(m, m);
        for j in 0..m {
            s[(j, j)] = 1.0 / self.chol[(j, j)];
            for i in (0..j).rev() {
                let mut acc = 0.0;
                for k in (i + 1)..=j {
                    acc += self.chol[(i, k)] * s[(k, j)];
                }
                s[(i, j)] = -acc / self.chol[(i, i)];
            }
        }
        let mut inv = s.matmul(&s.transpose());
        for i in 0..m {
            for j in (i + 1)..m {
                let avg = 0.5 * (inv[(i, j)] + inv[(j, i)]);
                inv[(i, j)] = avg;
                inv[(j, i)] = avg;
            }
        }
        Self::new(inv)
    }
}

fn minors_from_cholesky(t: &Matrix) -> Vec<f64> {
    let mut acc = 1.0;
    (0..t.rows())
        .map(|j| {
            acc *= t[(j, j)] * t[(j, j)];
            acc
        })
        .collect()
}

/// `[Δ_1(r), ..., Δ_m(r)]` from the cached Cholesky factor.
pub fn principal_minors(r: &PosDefMatrix) -> Vec<f64> {
    r.minors.clone()
}

/// Principal minors by direct LU determinants of the leading blocks. Kept as
/// an independent route for cross-checks.
pub fn principal_minors_direct(r: &Matrix) -> Vec<f64> {
    (1..=r.rows())
        .map(|i| determinant(&Matrix::from_fn(i, i, |a, b| r[(a, b)])))
        .collect()
}

/// `r^λ = exp(Σ λ_j log t_jj)`.
pub fn composite_power(r: &PosDefMatrix, lambda: &MultiIndex) -> C64 {
    log_composite_power(r, lambda).exp()
}

/// `log r^λ`, real-linear in the logs of the Cholesky diagonal.
pub fn log_composite_power(r: &PosDefMatrix, lambda: &MultiIndex) -> C64 {
    assert_eq!(r.dim(), lambda.len(), "cone dimension vs multi-index length");
    lambda
        .iter()
        .enumerate()
        .map(|(j, l)| l * r.chol[(j, j)].ln())
        .sum()
}

/// The minor-ratio form of the composite power, evaluated from direct minors.
pub fn composite_power_by_minors(r: &Matrix, lambda: &MultiIndex) -> Result<C64> {
    let minors = principal_minors_direct(r);
    let mut log = C64::new(0.0, 0.0);
    let mut prev = 1.0;
    for (i, &d) in minors.iter().enumerate() {
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { index: i, pivot: d });
        }
        log += lambda[i] * 0.5 * (d / prev).ln();
        prev = d;
    }
    Ok(log.exp())
}

/// Convenience: factorize and evaluate `r^λ` for a symmetric matrix.
pub fn composite_power_of(r: &Matrix, lambda: &MultiIndex) -> Result<C64> {
    Ok(composite_power(&PosDefMatrix::new(r.clone())?, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::vec;

    fn approx(a: C64, b: C64, rel: f64) -> bool {
        (a - b).norm() <= rel * a.norm().max(b.norm()).max(1e-300)
    }

    // Cofactor expansion, independent of the LU and Cholesky routes.
    fn cofactor_det(a: &Matrix) -> f64 {
        let n = a.rows();
        if n == 1 {
            return a[(0, 0)];
        }
        (0..n)
            .map(|j| {
                let minor = Matrix::from_fn(n - 1, n - 1, |r, c| {
                    a[(r + 1, if c < j { c } else { c + 1 })]
                });
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[(0, j)] * cofactor_det(&minor)
            })
            .sum()
    }

    fn spd(m: usize, seed: &[f64]) -> Matrix {
        let g = Matrix::from_fn(m, m, |i, j| seed[(i * m + j) % seed.len()] * (1.0 + i as f64));
        g.gram().add(&Matrix::identity(m))
    }

    #[test]
    fn cholesky_examples() {
        assert_eq!(cholesky_upper(&Matrix::identity(2)).unwrap(), Matrix::identity(2));
        let t = cholesky_upper(&Matrix::diag(&[4.0, 9.0])).unwrap();
        assert_eq!(t, Matrix::diag(&[2.0, 3.0]));
    }

    #[test]
    fn cholesky_rejects_indefinite_and_floor() {
        let bad = Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]);
        assert!(matches!(
            cholesky_upper(&bad),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
        let tiny = Matrix::diag(&[1.0, 1e-310]);
        assert!(cholesky_upper(&tiny).is_err());
        assert!(cholesky_upper_with_floor(&tiny, 0.0).is_ok());
    }

    #[test]
    fn minors_examples() {
        let i3 = PosDefMatrix::identity(3);
        assert_eq!(principal_minors(&i3), vec![1.0, 1.0, 1.0]);
        let d = PosDefMatrix::new(Matrix::diag(&[4.0, 9.0])).unwrap();
        assert_eq!(principal_minors(&d), vec![4.0, 36.0]);
    }

    #[test]
    fn minors_match_cofactor_oracle() {
        for m in 1..=3 {
            let r = spd(m, &[0.3, -0.7, 1.1, 0.2, 0.5, -0.4, 0.9, 0.1, -1.3]);
            let chol_minors = principal_minors(&PosDefMatrix::new(r.clone()).unwrap());
            for i in 1..=m {
                let block = Matrix::from_fn(i, i, |a, b| r[(a, b)]);
                let oracle = cofactor_det(&block);
                assert!((chol_minors[i - 1] - oracle).abs() <= 1e-10 * oracle);
            }
        }
    }

    #[test]
    fn composite_power_examples() {
        let lam = MultiIndex::real(&[0.7, -1.3, 2.2]);
        assert!(approx(composite_power(&PosDefMatrix::identity(3), &lam), C64::new(1.0, 0.0), 1e-15));
        let d = PosDefMatrix::new(Matrix::diag(&[4.0, 9.0])).unwrap();
        let v = composite_power(&d, &MultiIndex::real(&[1.0, 2.0]));
        assert!(approx(v, C64::new(18.0, 0.0), 1e-14));
        let r = PosDefMatrix::new(spd(3, &[0.4, 0.1, -0.8, 1.2])).unwrap();
        let l0 = MultiIndex::constant(C64::new(1.3, 0.4), 3);
        let expected = C64::new(r.det(), 0.0).powc(C64::new(0.65, 0.2));
        assert!(approx(composite_power(&r, &l0), expected, 1e-12));
    }

    #[test]
    fn reversal_examples() {
        assert_eq!(reverse_matrix(&Matrix::identity(3)), Matrix::identity(3));
        let r = Matrix::from_rows(&[[1.0, 2.0], [2.0, 5.0]]);
        assert_eq!(reverse_matrix(&r), Matrix::from_rows(&[[5.0, 2.0], [2.0, 1.0]]));
        assert_eq!(reverse_matrix(&reverse_matrix(&r)), r);
        let l = MultiIndex::real(&[1.0, 2.0, 3.0]);
        assert_eq!(reverse_index(&l), MultiIndex::real(&[3.0, 2.0, 1.0]));
        assert_eq!(reverse_index(&reverse_index(&l)), l);
        let c = MultiIndex::constant_real(0.5, 4);
        assert_eq!(reverse_index(&c), c);
    }

    fn arb_case() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>, Vec<f64>)> {
        (1usize..=4).prop_flat_map(|m| {
            (
                Just(m),
                proptest::collection::vec(-1.5f64..1.5, m * m),
                proptest::collection::vec(-3.0f64..3.0, 2 * m),
                proptest::collection::vec(-3.0f64..3.0, 2 * m),
            )
        })
    }

    fn complex_index(v: &[f64]) -> MultiIndex {
        let m = v.len() / 2;
        MultiIndex::new((0..m).map(|j| C64::new(v[j], 0.3 * v[m + j])).collect())
    }

    proptest! {
        #[test]
        fn minors_route_agrees((m, g, l, _) in arb_case()) {
            let r = Matrix::from_row_major(m, m, g).unwrap().gram().add(&Matrix::identity(m));
            let lam = complex_index(&l);
            let a = composite_power(&PosDefMatrix::new(r.clone()).unwrap(), &lam);
            let b = composite_power_by_minors(&r, &lam).unwrap();
            prop_assert!(approx(a, b, 1e-10));
        }

        #[test]
        fn reconstructs((m, g, _, _) in arb_case()) {
            let r = Matrix::from_row_major(m, m, g).unwrap().gram().add(&Matrix::identity(m));
            let t = cholesky_upper(&r).unwrap();
            prop_assert!(t.gram().sub(&r).max_abs() <= 1e-10 * r.max_abs());
        }

        #[test]
        fn power_is_multiplicative((m, g, l, mu) in arb_case()) {
            let r = PosDefMatrix::new(
                Matrix::from_row_major(m, m, g).unwrap().gram().add(&Matrix::identity(m)),
            ).unwrap();
            let (l, mu) = (complex_index(&l), complex_index(&mu));
            let lhs = composite_power(&r, &(&l + &mu));
            let rhs = composite_power(&r, &l) * composite_power(&r, &mu);
            prop_assert!(approx(lhs, rhs, 1e-10));
        }
    }
}
