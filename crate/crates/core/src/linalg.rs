//! Dense row-major matrices and the handful of factorizations the rest of the
//! crate needs. Sizes are tiny (n <= 10, m <= 8), so everything is unblocked.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};


use crate::error::{dims, Error, Result};
use crate::C64;

/// Default floor below which a Cholesky pivot (or squared QR diagonal) is
/// treated as zero.
pub const PIVOT_FLOOR: f64 = 1e-300;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>12.6e} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// First `m` columns of the `n x n` identity.
    pub fn eye(n: usize, m: usize) -> Self {
        let mut out = Self::zeros(n, m);
        for i in 0..n.min(m) {
            out[(i, i)] = 1.0;
        }
        out
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(dims(alloc::format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input; meant for
    /// literals.
    pub fn from_rows<const C: usize>(rows: &[[f64; C]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Matrix {
            rows: rows.len(),
            cols: C,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// `self' * rhs` without forming the transpose.
    pub fn tr_matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "tr_matmul shape mismatch");
        let mut out = Matrix::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(k, i)];
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Gram matrix `x'x`, symmetric by construction.
    pub fn gram(&self) -> Matrix {
        let m = self.cols;
        let mut out = Matrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut s = 0.0;
                for k in 0..self.rows {
                    s += self[(k, i)] * self[(k, j)];
                }
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Columns `start..end` as a new matrix.
    pub fn columns(&self, start: usize, end: usize) -> Matrix {
        Matrix::from_fn(self.rows, end - start, |i, j| self[(i, start + j)])
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> Matrix {
        Matrix::from_fn(end - start, self.cols, |i, j| self[(start + i, j)])
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        Matrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                rhs[(i, j - self.cols)]
            }
        })
    }

    /// Vertical concatenation `[self; rhs]`.
    pub fn vcat(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols);
        Matrix::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)]
            } else {
                rhs[(i - self.rows, j)]
            }
        })
    }

    /// Frobenius inner product `tr(self' rhs)`.
    pub fn dot(&self, rhs: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data.iter().zip(&rhs.data).map(|(a, b)| a * b).sum()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Largest deviation of `self' self` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        self.gram().sub(&Matrix::identity(self.cols)).max_abs()
    }
}

/// Thin Householder QR `x = q r` with `q` having orthonormal columns and `r`
/// upper triangular with a strictly positive diagonal. The sign gauge makes
/// the factorization unique.
pub fn qr_positive(x: &Matrix) -> Result<(Matrix, Matrix)> {
    let (n, m) = (x.rows(), x.cols());
    if m == 0 || m > n {
        return Err(dims(alloc::format!("QR of a {n}x{m} matrix")));
    }
    let (a, reflectors) = householder(x);
    let mut r = Matrix::from_fn(m, m, |i, j| if j >= i { a[(i, j)] } else { 0.0 });
    let mut q = apply_reflectors(&reflectors, &Matrix::eye(n, m));
    let scale = x.max_abs().max(f64::MIN_POSITIVE);
    for j in 0..m {
        let d = r[(j, j)];
        if !(d * d > PIVOT_FLOOR) || d.abs() <= 1e-13 * scale {
            return Err(Error::RankDeficient { expected: m });
        }
        if d < 0.0 {
            for k in j..m {
                r[(j, k)] = -r[(j, k)];
            }
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    Ok((q, r))
}

/// Orthonormal basis of the complement of span(`frame`): an `n x (n-m)`
/// matrix `c` with `[frame | c]` orthogonal.
pub fn orthogonal_complement(frame: &Matrix) -> Matrix {
    let (n, m) = (frame.rows(), frame.cols());
    let (_, reflectors) = householder(frame);
    let tail = Matrix::from_fn(n, n - m, |i, j| if i == m + j { 1.0 } else { 0.0 });
    apply_reflectors(&reflectors, &tail)
}

// Returns the reduced matrix and the Householder vectors (each of full length
// n, zero above its pivot).
fn householder(x: &Matrix) -> (Matrix, Vec<Vec<f64>>) {
    let (n, m) = (x.rows(), x.cols());
    let mut a = x.clone();
    let mut reflectors = Vec::with_capacity(m);
    for k in 0..m.min(n) {
        let norm = (k..n).map(|i| a[(i, k)] * a[(i, k)]).sum::<f64>().sqrt();
        let mut v = vec![0.0; n];
        if norm == 0.0 {
            reflectors.push(v);
            continue;
        }
        let alpha = if a[(k, k)] > 0.0 { -norm } else { norm };
        for i in k..n {
            v[i] = a[(i, k)];
        }
        v[k] -= alpha;
        let vnorm2 = v[k..].iter().map(|t| t * t).sum::<f64>();
        if vnorm2 == 0.0 {
            reflectors.push(vec![0.0; n]);
            continue;
        }
        for j in k..m {
            let s = (k..n).map(|i| v[i] * a[(i, j)]).sum::<f64>() * 2.0 / vnorm2;
            for i in k..n {
                a[(i, j)] -= s * v[i];
            }
        }
        let inv = 1.0 / vnorm2.sqrt();
        v.iter_mut().for_each(|t| *t *= inv);
        reflectors.push(v);
    }
    (a, reflectors)
}

// Computes H_1 H_2 ... H_m * b.
fn apply_reflectors(reflectors: &[Vec<f64>], b: &Matrix) -> Matrix {
    let mut out = b.clone();
    let n = out.rows();
    for v in reflectors.iter().rev() {
        for j in 0..out.cols() {
            let s = 2.0 * (0..n).map(|i| v[i] * out[(i, j)]).sum::<f64>();
            if s != 0.0 {
                for i in 0..n {
                    out[(i, j)] -= s * v[i];
                }
            }
        }
    }
    out
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and a matrix whose columns are the eigenvectors.
pub fn symmetric_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.rows();
    let mut s = a.clone();
    let mut v = Matrix::identity(n);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += s[(i, j)] * s[(i, j)];
            }
        }
        let scale = s.max_abs();
        if off.sqrt() <= 1e-17 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = s[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (s[(q, q)] - s[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let skp = s[(k, p)];
                    let skq = s[(k, q)];
                    s[(k, p)] = c * skp - sn * skq;
                    s[(k, q)] = sn * skp + c * skq;
                }
                for k in 0..n {
                    let spk = s[(p, k)];
                    let sqk = s[(q, k)];
                    s[(p, k)] = c * spk - sn * sqk;
                    s[(q, k)] = sn * spk + c * sqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| s[(i, i)]).collect(), v)
}

/// `f(a)` for symmetric `a`, applied through the spectrum.
pub fn symmetric_function(a: &Matrix, f: impl Fn(f64) -> f64) -> Matrix {
    let (values, vectors) = symmetric_eigen(a);
    let n = a.rows();
    Matrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| vectors[(i, k)] * f(values[k]) * vectors[(j, k)])
            .sum()
    })
}

/// LU with partial pivoting; returns the determinant.
pub fn determinant(a: &Matrix) -> f64 {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs()))
            .unwrap();
        if m[(p, k)] == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(p, j)];
                m[(p, j)] = t;
            }
            det = -det;
        }
        let pivot = m[(k, k)];
        det *= pivot;
        for i in (k + 1)..n {
            let f = m[(i, k)] / pivot;
            for j in k..n {
                m[(i, j)] -= f * m[(k, j)];
            }
        }
    }
    det
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    let mut inv = Matrix::identity(n);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs()))
            .unwrap();
        if m[(p, k)].abs() <= f64::MIN_POSITIVE {
            return Err(Error::RankDeficient { expected: n });
        }
        for j in 0..n {
            m.data.swap(k * n + j, p * n + j);
            inv.data.swap(k * n + j, p * n + j);
        }
        let pivot = m[(k, k)];
        for j in 0..n {
            m[(k, j)] /= pivot;
            inv[(k, j)] /= pivot;
        }
        for i in 0..n {
            if i != k {
                let f = m[(i, k)];
                if f != 0.0 {
                    for j in 0..n {
                        m[(i, j)] -= f * m[(k, j)];
                        inv[(i, j)] -= f * inv[(k, j)];
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// Determinant of a complex `m x m` matrix given row-major.
pub fn complex_determinant(m: usize, entries: &[C64]) -> C64 {
    assert_eq!(entries.len(), m * m);
    let mut a = entries.to_vec();
    let mut det = C64::new(1.0, 0.0);
    for k in 0..m {
        let p = (k..m)
            .max_by(|&i, &j| a[i * m + k].norm().total_cmp(&a[j * m + k].norm()))
            .unwrap();
        if a[p * m + k].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p != k {
            for j in 0..m {
                a.swap(k * m + j, p * m + j);
            }
            det = -det;
        }
        let pivot = a[k * m + k];
        det *= pivot;
        for i in (k + 1)..m {
            let f = a[i * m + k] / pivot;
            for j in k..m {
                let t = a[k * m + j];
                a[i * m + j] -= f * t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Matrix {
        Matrix::from_rows(&[
            [0.3, -1.2, 0.5],
            [1.1, 0.4, -0.7],
            [-0.2, 0.9, 1.3],
            [0.8, 0.1, 0.2],
            [-0.5, 0.6, -0.9],
        ])
    }

    #[test]
    fn qr_reconstructs_with_positive_diagonal() {
        let x = sample();
        let (q, r) = qr_positive(&x).unwrap();
        assert!(q.orthonormality_defect() < 1e-14);
        assert!(q.matmul(&r).sub(&x).max_abs() < 1e-14);
        for i in 0..3 {
            assert!(r[(i, i)] > 0.0);
            for j in 0..i {
                assert_eq!(r[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn qr_rejects_rank_deficient_input() {
        let x = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]]);
        assert_eq!(qr_positive(&x), Err(Error::RankDeficient { expected: 2 }));
    }

    #[test]
    fn complement_completes_an_orthogonal_matrix() {
        let (q, _) = qr_positive(&sample()).unwrap();
        let c = orthogonal_complement(&q);
        let full = q.hcat(&c);
        assert!(full.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn jacobi_diagonalizes() {
        let x = sample();
        let a = x.gram();
        let (vals, vecs) = symmetric_eigen(&a);
        let rebuilt = vecs.matmul(&Matrix::diag(&vals)).matmul(&vecs.transpose());
        assert!(rebuilt.sub(&a).max_abs() < 1e-13);
        let root = symmetric_function(&a, f64::sqrt);
        assert!(root.matmul(&root).sub(&a).max_abs() < 1e-13);
    }

    #[test]
    fn determinant_and_inverse_agree() {
        let a = sample().gram();
        let inv = inverse(&a).unwrap();
        assert!(inv.matmul(&a).sub(&Matrix::identity(3)).max_abs() < 1e-13);
        let d = determinant(&a);
        let di = determinant(&inv);
        assert!((d * di - 1.0).abs() < 1e-13);
        let c: Vec<C64> = a.as_slice().iter().map(|&v| C64::new(v, 0.0)).collect();
        assert!((complex_determinant(3, &c).re - d).abs() < 1e-12 * d.abs());
    }
}
