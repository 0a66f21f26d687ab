//! Numerical core for composite cosine transforms on Stiefel manifolds.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation: dense small-matrix algebra on the cone of positive definite
//! matrices, meromorphic gamma-function bookkeeping, Haar sampling and
//! seeded Monte Carlo integration over `V_{n,m}` and `R^{n x m}`, the
//! transforms themselves and the matrix Radon transform of Gaussian
//! mixtures. File formats, the CLI and parallel execution live in the
//! `compcos` companion crate.
//!
//! Module map:
//!
//! * [`cone`] - Cholesky factors, principal minors, composite powers.
//! * [`special`] - log-gamma, cone/Siegel gamma, the multiplier, classifier.
//! * [`geometry`] - Stiefel frames, coordinate decompositions, integrators.
//! * [`transforms`] - cosine transforms, H-polynomials, zeta integrals and
//!   the identity checks built on them.
//! * [`radon`] - matrix planes, Radon transform and the projection-slice check.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod check;
pub mod cone;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod mc;
pub mod quadrature;
pub mod radon;
pub mod special;
pub mod transforms;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

pub use check::Comparison;
pub use cone::{MultiIndex, PosDefMatrix};
pub use geometry::StiefelFrame;
pub use linalg::Matrix;
pub use mc::{Executor, McConfig, McEstimate, RngStream, Sequential};
pub use special::TaggedValue;
