//! Matrix Radon transform `(R_k f)(ξ, t) = ∫ f(g_ξ [ω; t]) dω` of Gaussian
//! mixtures, and the projection-slice identity `(Ff)(ξb) = F̃[(R_k f)(ξ, ·)](b)`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;


use crate::check::Comparison;
use crate::error::{dims, Error, Result};
use crate::geometry::{sample_orthogonal, GaussianProposal, StiefelFrame};
use crate::linalg::{determinant, Matrix};
use crate::mc::{estimate_mean, Executor, McConfig, McEstimate, Rng};
use crate::C64;

/// `w e^{-s |x - c|^2 / 2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianComponent {
    pub weight: f64,
    pub center: Matrix,
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMixture {
    rows: usize,
    cols: usize,
    components: Vec<GaussianComponent>,
}

impl GaussianMixture {
    pub fn new(components: Vec<GaussianComponent>) -> Result<Self> {
        let first = components.first().ok_or_else(|| dims("empty mixture"))?;
        let (rows, cols) = (first.center.rows(), first.center.cols());
        for c in &components {
            if (c.center.rows(), c.center.cols()) != (rows, cols) {
                return Err(dims("mixture components must share a shape"));
            }
            if !(c.scale > 0.0) {
                return Err(dims("mixture scales must be positive"));
            }
        }
        Ok(GaussianMixture { rows, cols, components })
    }

    /// A single centered Gaussian `e^{-s|x|^2/2}` on `R^{n x m}`.
    pub fn centered(n: usize, m: usize, scale: f64) -> Result<Self> {
        Self::new(alloc::vec![GaussianComponent {
            weight: 1.0,
            center: Matrix::zeros(n, m),
            scale,
        }])
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn eval(&self, x: &Matrix) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let d = x.sub(&c.center);
                c.weight * (-0.5 * c.scale * d.dot(&d)).exp()
            })
            .sum()
    }

    /// `∫ e^{i tr(y'x)} f(x) dx`.
    pub fn fourier(&self, y: &Matrix) -> C64 {
        let dim = (self.rows * self.cols) as f64;
        self.components
            .iter()
            .map(|c| {
                let modulus = c.weight * (0.5 * dim * (2.0 * PI / c.scale).ln() - 0.5 * y.dot(y) / c.scale).exp();
                C64::from_polar(modulus, y.dot(&c.center))
            })
            .sum()
    }

    pub fn total_integral(&self) -> f64 {
        self.fourier(&Matrix::zeros(self.rows, self.cols)).re
    }

    /// `f ∘ γ^{-1}` for an orthogonal `γ`: centers move to `γ c`.
    pub fn rotated(&self, gamma: &Matrix) -> Self {
        GaussianMixture {
            rows: self.rows,
            cols: self.cols,
            components: self
                .components
                .iter()
                .map(|c| GaussianComponent {
                    center: gamma.matmul(&c.center),
                    ..c.clone()
                })
                .collect(),
        }
    }
}

/// `τ = {x : ξ'x = t}` with `ξ ∈ V_{n,k}` and `t` a `k x m` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPlane {
    pub xi: StiefelFrame,
    pub t: Matrix,
}

impl MatrixPlane {
    pub fn new(xi: StiefelFrame, t: Matrix) -> Result<Self> {
        if t.rows() != xi.m() {
            return Err(dims("t must have k rows"));
        }
        Ok(MatrixPlane { xi, t })
    }
}

/// A rotation `g ∈ SO(n)` whose last `k` columns are `ξ`. The first `n - k`
/// columns are a complement of `ξ` right-multiplied by `gauge` (an
/// orthogonal `(n-k) x (n-k)` matrix; `None` means the identity), with the
/// first column flipped if needed to make `det g = 1`.
pub fn plane_rotation(xi: &StiefelFrame, gauge: Option<&Matrix>) -> Result<Matrix> {
    let mut c = xi.complement()?.matrix().clone();
    if let Some(g) = gauge {
        c = c.matmul(g);
    }
    let mut g = c.hcat(xi.matrix());
    if determinant(&g) < 0.0 {
        for i in 0..g.rows() {
            g[(i, 0)] = -g[(i, 0)];
        }
    }
    Ok(g)
}

fn check_radon_dims(n: usize, k: usize, m: usize) -> Result<()> {
    if !(1 <= m && m <= k && k < n) {
        return Err(Error::InvalidDimensions(alloc::format!(
            "need 1 <= m <= k < n, got n = {n}, k = {k}, m = {m}"
        )));
    }
    Ok(())
}

fn check_plane(f: &GaussianMixture, plane: &MatrixPlane) -> Result<(usize, usize, usize)> {
    let (n, m) = f.shape();
    let k = plane.xi.m();
    if plane.xi.n() != n || plane.t.cols() != m {
        return Err(Error::InvalidDimensions("plane and function shapes differ".into()));
    }
    check_radon_dims(n, k, m)?;
    Ok((n, k, m))
}

/// The restriction of `f` to `τ(ξ, ·)` integrated over each plane, as a
/// mixture on `R^{k x m}`: component `w e^{-s|x-c|^2/2}` becomes
/// `w (2π/s)^{(n-k)m/2} e^{-s|t - ξ'c|^2/2}`.
pub fn radon_slice(f: &GaussianMixture, xi: &StiefelFrame, gauge: Option<&Matrix>) -> Result<GaussianMixture> {
    let (n, m) = f.shape();
    let k = xi.m();
    if xi.n() != n {
        return Err(Error::InvalidDimensions("frame and function shapes differ".into()));
    }
    check_radon_dims(n, k, m)?;
    let g = plane_rotation(xi, gauge)?;
    let free = ((n - k) * m) as f64;
    let components = f
        .components
        .iter()
        .map(|c| {
            // In the rotated coordinates [ω; t] = g'x the center splits into
            // a free block, integrated out, and the plane offset.
            let rotated = g.tr_matmul(&c.center);
            GaussianComponent {
                weight: c.weight * (0.5 * free * (2.0 * PI / c.scale).ln()).exp(),
                center: rotated.row_block(n - k, n),
                scale: c.scale,
            }
        })
        .collect();
    GaussianMixture::new(components)
}

/// `(R_k f)(τ)` in closed form.
pub fn radon_gaussian(f: &GaussianMixture, plane: &MatrixPlane) -> Result<f64> {
    check_plane(f, plane)?;
    Ok(radon_slice(f, &plane.xi, None)?.eval(&plane.t))
}

/// `(R_k f)(τ)` by Monte Carlo over `ω ∈ R^{(n-k) x m}`.
pub fn radon_monte_carlo(
    f: &GaussianMixture,
    plane: &MatrixPlane,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<McEstimate> {
    let (n, k, m) = check_plane(f, plane)?;
    let g = plane_rotation(&plane.xi, None)?;
    let scale = f.components.iter().map(|c| c.scale).fold(f64::INFINITY, f64::min);
    let proposal = GaussianProposal::with_scale(scale);
    estimate_mean(config, exec, &|rng: &mut Rng| {
        let draw = proposal.sample(n - k, m, rng)?;
        let x = g.matmul(&draw.x.vcat(&plane.t));
        Ok(C64::new(f.eval(&x) * draw.weight, 0.0))
    })
}

/// Relative tolerance of the projection-slice comparison.
pub const SLICE_TOLERANCE: f64 = 1e-8;

/// `(Ff)(ξb)` against the `k x m` Fourier transform of `t ↦ (R_k f)(ξ, t)`
/// at `b`; tolerance `1e-8 max(|lhs|, 1)`.
pub fn projection_slice_residual(f: &GaussianMixture, xi: &StiefelFrame, b: &Matrix) -> Result<Comparison> {
    let (_, m) = f.shape();
    if (b.rows(), b.cols()) != (xi.m(), m) {
        return Err(Error::InvalidDimensions("b must be k x m".into()));
    }
    let slice = radon_slice(f, xi, None)?;
    let lhs = f.fourier(&xi.matrix().matmul(b));
    let rhs = slice.fourier(b);
    Ok(Comparison::values(
        "projection_slice",
        lhs,
        rhs,
        SLICE_TOLERANCE * lhs.norm().max(1.0),
    ))
}

/// A random orthogonal gauge for [`plane_rotation`].
pub fn random_gauge(n: usize, k: usize, rng: &mut Rng) -> Matrix {
    sample_orthogonal(n - k, rng)
}
