//! H-polynomials `P_k(x) = det(a'x)^k` with `a` a complex `n x m` matrix
//! satisfying `a'a = 0` (plain transpose).

use alloc::vec::Vec;

use super::{AngleFunction, Invariance};
use crate::error::{Error, Result};
use crate::linalg::{complex_determinant, Matrix};
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct HPolynomial {
    n: usize,
    m: usize,
    k: u32,
    /// Row-major `n x m`.
    a: Vec<C64>,
}

impl HPolynomial {
    /// `a = [e_1 ... e_m] + i [e_{m+1} ... e_{2m}]`; needs `2m <= n`.
    pub fn new(n: usize, m: usize, k: u32) -> Result<Self> {
        if m == 0 || 2 * m > n {
            return Err(Error::DimensionsTooSmall { n, m });
        }
        let mut a = alloc::vec![C64::new(0.0, 0.0); n * m];
        for j in 0..m {
            a[j * m + j] = C64::new(1.0, 0.0);
            a[(m + j) * m + j] = C64::new(0.0, 1.0);
        }
        Ok(HPolynomial { n, m, k, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// `max |(a'a)_{ij}|`.
    pub fn isotropy_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.m {
            for j in 0..self.m {
                let s: C64 = (0..self.n).map(|l| self.a[l * self.m + i] * self.a[l * self.m + j]).sum();
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    /// `a'x` as a row-major `m x m` complex matrix.
    pub fn pairing(&self, x: &Matrix) -> Vec<C64> {
        let m = self.m;
        let mut out = alloc::vec![C64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..x.cols() {
                out[i * m + j] = (0..self.n).map(|l| self.a[l * m + i] * x[(l, j)]).sum();
            }
        }
        out
    }

    pub fn eval(&self, x: &Matrix) -> C64 {
        assert_eq!((x.rows(), x.cols()), (self.n, self.m), "H-polynomial argument shape");
        complex_determinant(self.m, &self.pairing(x)).powu(self.k)
    }
}

impl AngleFunction for HPolynomial {
    fn eval(&self, v: &Matrix) -> C64 {
        HPolynomial::eval(self, v)
    }

    /// `det(γ)^k` is 1 for every `γ ∈ O(m)` only when `k` is even.
    fn invariance(&self) -> Invariance {
        if self.k % 2 == 0 {
            Invariance::RightO
        } else {
            Invariance::RightSO
        }
    }

    fn constant(&self) -> Option<C64> {
        (self.k == 0).then_some(C64::new(1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::gaussian_matrix;
    use crate::linalg::determinant;
    use crate::mc::RngStream;

    // Central second differences in every coordinate of R^{nm}.
    fn fd_laplacian(p: &HPolynomial, x: &Matrix, h: f64) -> C64 {
        let mut sum = C64::new(0.0, 0.0);
        let f0 = p.eval(x);
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[(i, j)] += h;
                xm[(i, j)] -= h;
                sum += (p.eval(&xp) + p.eval(&xm) - f0 * 2.0) / (h * h);
            }
        }
        sum
    }

    #[test]
    fn construction() {
        assert!(matches!(HPolynomial::new(3, 2, 1), Err(Error::DimensionsTooSmall { .. })));
        let p = HPolynomial::new(4, 2, 2).unwrap();
        assert_eq!(p.isotropy_defect(), 0.0);
        let x = Matrix::eye(4, 2);
        assert_eq!(p.eval(&x), C64::new(1.0, 0.0));
        let p0 = HPolynomial::new(6, 3, 0).unwrap();
        assert_eq!(p0.eval(&gaussian_matrix(6, 3, &mut RngStream::new(1, 0).rng())), C64::new(1.0, 0.0));
    }

    #[test]
    fn rank_one_degree_one_is_x1_plus_i_x2() {
        let p = HPolynomial::new(2, 1, 1).unwrap();
        let x = Matrix::from_rows(&[[0.3], [-1.7]]);
        assert_eq!(p.eval(&x), C64::new(0.3, -1.7));
    }

    #[test]
    fn harmonic_by_finite_differences() {
        let mut rng = RngStream::new(2, 0).rng();
        for &(n, m, k) in &[(2usize, 1usize, 1u32), (3, 1, 2), (4, 2, 2), (5, 2, 3)] {
            let p = HPolynomial::new(n, m, k).unwrap();
            for _ in 0..10 {
                let x = gaussian_matrix(n, m, &mut rng);
                let scale = p.eval(&x).norm().max(1.0) * (k as f64 * m as f64).powi(2);
                assert!(fd_laplacian(&p, &x, 1e-3).norm() <= 1e-4 * scale, "({n},{m},{k})");
            }
        }
    }

    #[test]
    fn determinantally_homogeneous() {
        let mut rng = RngStream::new(3, 0).rng();
        let p = HPolynomial::new(5, 2, 3).unwrap();
        for _ in 0..10 {
            let x = gaussian_matrix(5, 2, &mut rng);
            let g = gaussian_matrix(2, 2, &mut rng);
            let lhs = p.eval(&x.matmul(&g));
            let rhs = p.eval(&x) * determinant(&g).powi(3);
            assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1e-300));
        }
    }
}
