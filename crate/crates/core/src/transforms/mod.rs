//! Composite cosine transforms and the identities around them.
//!
//! * [`hpoly`] - H-polynomials `det(a'x)^k`.
//! * [`cosine`] - `T^λ`, its determinant form, the radial extension, and the
//!   eigenvalue, annihilation and complement-duality checks.
//! * [`zeta`] - zeta integrals, the functional equation, the Fourier
//!   transform of composite powers, and the Hecke identity.

use alloc::boxed::Box;

use crate::geometry::{sample_orthogonal, sample_stiefel};
use crate::linalg::Matrix;
use crate::mc::Rng;
use crate::C64;

pub mod cosine;
pub mod hpoly;
pub mod zeta;

pub use cosine::{
    annihilation_check, cosine_transform, cosine_transform_at, det_cosine_transform,
    eigen_relation_check, perp_duality_check, radial_extension,
};
pub use hpoly::HPolynomial;
pub use zeta::{
    functional_equation_residual, hecke_identity_residual, power_fourier_residual,
    zeta_closed_form, zeta_integral, zeta_star, GaussianSchwartz,
};

/// Declared right-invariance of a function on `V_{n,m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariance {
    RightO,
    RightSO,
    None,
}

/// A function of an `m`-frame.
pub trait AngleFunction: Sync {
    fn eval(&self, v: &Matrix) -> C64;

    fn invariance(&self) -> Invariance {
        Invariance::None
    }

    /// `Some(c)` if the function is identically `c`; lets integrators skip
    /// computing frames.
    fn constant(&self) -> Option<C64> {
        None
    }
}

/// `f ≡ 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct One;

impl AngleFunction for One {
    fn eval(&self, _: &Matrix) -> C64 {
        C64::new(1.0, 0.0)
    }

    fn invariance(&self) -> Invariance {
        Invariance::RightO
    }

    fn constant(&self) -> Option<C64> {
        Some(C64::new(1.0, 0.0))
    }
}

/// A function of the projector `vv'`, hence right-`O(m)`-invariant.
pub struct ProjectorFunction(pub Box<dyn Fn(&Matrix) -> C64 + Sync + Send>);

impl ProjectorFunction {
    pub fn new(f: impl Fn(&Matrix) -> C64 + Sync + Send + 'static) -> Self {
        ProjectorFunction(Box::new(f))
    }

    /// `(vv')_{ii}`, the squared length of row `i` of the frame.
    pub fn diagonal_entry(i: usize) -> Self {
        Self::new(move |p| C64::new(p[(i, i)], 0.0))
    }

    pub fn eval_projector(&self, p: &Matrix) -> C64 {
        (self.0)(p)
    }
}

impl AngleFunction for ProjectorFunction {
    fn eval(&self, v: &Matrix) -> C64 {
        (self.0)(&v.matmul(&v.transpose()))
    }

    fn invariance(&self) -> Invariance {
        Invariance::RightO
    }
}

/// Largest deviation `|f(vγ) - f(v)|` over `pairs` random frames and
/// rotations, with `γ` drawn from `O(m)` or `SO(m)` per the declared
/// invariance. Zero when no invariance is declared.
pub fn invariance_defect(f: &dyn AngleFunction, n: usize, m: usize, pairs: usize, rng: &mut Rng) -> f64 {
    let kind = f.invariance();
    if kind == Invariance::None {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let v = sample_stiefel(n, m, rng).expect("valid dimensions");
        let mut g = sample_orthogonal(m, rng);
        let det = crate::linalg::determinant(&g);
        if kind == Invariance::RightSO && det < 0.0 {
            for i in 0..m {
                g[(i, 0)] = -g[(i, 0)];
            }
        }
        let a = f.eval(v.matrix());
        let b = f.eval(&v.matrix().matmul(&g));
        worst = worst.max((a - b).norm() / a.norm().max(1.0));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::RngStream;

    #[test]
    fn declared_invariances_hold() {
        let mut rng = RngStream::new(21, 0).rng();
        assert!(invariance_defect(&One, 4, 2, 10, &mut rng) == 0.0);
        let f = ProjectorFunction::diagonal_entry(0);
        assert!(invariance_defect(&f, 5, 2, 10, &mut rng) < 1e-10);
        for k in 0..4 {
            let p = HPolynomial::new(4, 2, k).unwrap();
            assert!(invariance_defect(&p, 4, 2, 10, &mut rng) < 1e-10, "k = {k}");
        }
    }
}
