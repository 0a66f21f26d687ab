//! `(T^λ f)(u) = ∫_{V_{n,m}} f(v) (u'vv'u)^λ dv` and checks built on it.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;


use super::{AngleFunction, HPolynomial, ProjectorFunction};
use crate::check::{Comparison, SIGMA_MULTIPLE};
use crate::cone::{composite_power, log_composite_power, MultiIndex, PosDefMatrix};
use crate::error::{dims, Error, Result};
use crate::geometry::{sample_stiefel, triangular_decompose, KernelSampler, StiefelFrame};
use crate::linalg::{determinant, Matrix};
use crate::mc::{estimate_mean, Executor, McConfig, McEstimate, Rng, RngStream};
use crate::special::{in_l_set, multiplier_constant, multiplier_mu, stiefel_volume, TaggedValue};
use crate::C64;

fn check_domain(lambda: &MultiIndex, m: usize, force: bool) -> Result<bool> {
    if lambda.len() != m {
        return Err(dims(alloc::format!("multi-index of length {} for m = {m}", lambda.len())));
    }
    let inside = in_l_set(lambda);
    if !inside && !force {
        return Err(Error::ConvergenceDomain(alloc::format!(
            "Re λ_j > j - m - 1 fails for {:?}",
            lambda.re()
        )));
    }
    Ok(!inside)
}

pub(super) fn frame_value(f: &dyn AngleFunction, v: &StiefelFrame) -> C64 {
    f.constant().unwrap_or_else(|| f.eval(v.matrix()))
}

/// Monte Carlo estimate of `(T^λ f)(u)`.
///
/// `λ ∉ 𝔏` is rejected unless `force` is set; a forced estimate is returned
/// with `diverges = true`.
pub fn cosine_transform(
    f: &dyn AngleFunction,
    lambda: &MultiIndex,
    u: &StiefelFrame,
    config: &McConfig,
    exec: &dyn Executor,
    force: bool,
) -> Result<McEstimate> {
    let (n, m) = (u.n(), u.m());
    let diverges = check_domain(lambda, m, force)?;
    let sampler = if diverges { KernelSampler::plain(u) } else { KernelSampler::for_kernel(u, lambda)? };
    let est = estimate_mean(config, exec, &|rng: &mut Rng| {
        let d = sampler.sample(rng)?;
        let kernel = (log_composite_power(&d.gram, lambda) + d.log_weight).exp();
        Ok(frame_value(f, &d.v) * kernel)
    })?;
    let mut est = est.scale(C64::new(stiefel_volume(n, m)?, 0.0));
    est.diverges = diverges;
    Ok(est)
}

/// `(T^λ f)(u) = ∫ f(v) |det(v'u)|^λ dv` for scalar `λ`, evaluated through
/// the determinant instead of the Cholesky factor.
pub fn det_cosine_transform(
    f: &dyn AngleFunction,
    lambda: C64,
    u: &StiefelFrame,
    config: &McConfig,
    exec: &dyn Executor,
    force: bool,
) -> Result<McEstimate> {
    let (n, m) = (u.n(), u.m());
    let constant = MultiIndex::constant(lambda, m);
    let diverges = check_domain(&constant, m, force)?;
    let sampler = if diverges { KernelSampler::plain(u) } else { KernelSampler::for_kernel(u, &constant)? };
    let est = estimate_mean(config, exec, &|rng: &mut Rng| {
        let d = sampler.sample(rng)?;
        let det = determinant(&u.matrix().tr_matmul(d.v.matrix())).abs();
        if !(det > 0.0) {
            return Err(Error::RankDeficient { expected: m });
        }
        let kernel = (lambda * det.ln() + d.log_weight).exp();
        Ok(frame_value(f, &d.v) * kernel)
    })?;
    let mut est = est.scale(C64::new(stiefel_volume(n, m)?, 0.0));
    est.diverges = diverges;
    Ok(est)
}

/// `(T^λ f)(y) = (y'y)^λ (T^λ f)(u)` for `y = ut` of full rank.
pub fn radial_extension(
    f: &dyn AngleFunction,
    lambda: &MultiIndex,
    y: &Matrix,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<McEstimate> {
    let (u, t) = triangular_decompose(y)?;
    let radial = composite_power(&PosDefMatrix::from_upper(&t)?, lambda);
    Ok(cosine_transform(f, lambda, &u, config, exec, false)?.scale(radial))
}

/// Direct Monte Carlo of `∫ f(v) (y'vv'y)^λ dv` at a full-rank `y` under
/// plain Haar sampling; the independent route to [`radial_extension`].
pub fn cosine_transform_at(
    f: &dyn AngleFunction,
    lambda: &MultiIndex,
    y: &Matrix,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<McEstimate> {
    let (n, m) = (y.rows(), y.cols());
    check_domain(lambda, m, false)?;
    let est = estimate_mean(config, exec, &|rng: &mut Rng| {
        let v = sample_stiefel(n, m, rng)?;
        let w = y.tr_matmul(v.matrix());
        let g = PosDefMatrix::new(w.matmul(&w.transpose()))?;
        Ok(frame_value(f, &v) * composite_power(&g, lambda))
    })?;
    Ok(est.scale(C64::new(stiefel_volume(n, m)?, 0.0)))
}

/// Rayleigh quotient of one frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameQuotient {
    pub p_value: C64,
    pub quotient: C64,
    pub stderr: f64,
    pub skipped_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenReport {
    /// `c μ_k(λ)`.
    pub expected: C64,
    pub multiplier: TaggedValue,
    pub threshold: f64,
    pub frames: Vec<FrameQuotient>,
    /// Largest componentwise distance of a quotient from their mean.
    pub dispersion: f64,
    pub max_stderr: f64,
}

impl EigenReport {
    pub fn comparisons(&self, label: &str) -> Vec<Comparison> {
        let mut out: Vec<Comparison> = self
            .frames
            .iter()
            .enumerate()
            .map(|(i, q)| {
                Comparison::new(
                    alloc::format!("{label}/frame{i}"),
                    q.quotient,
                    self.expected,
                    q.stderr,
                    SIGMA_MULTIPLE * q.stderr,
                    q.skipped_fraction,
                )
            })
            .collect();
        out.push(Comparison::new(
            alloc::format!("{label}/dispersion"),
            C64::new(self.dispersion, 0.0),
            C64::new(0.0, 0.0),
            self.max_stderr,
            SIGMA_MULTIPLE * self.max_stderr,
            0.0,
        ));
        out
    }

    pub fn pass(&self) -> bool {
        self.comparisons("").iter().all(|c| c.pass)
    }
}

/// Frames with `|P(u)|` at least 5% of the 90th percentile of `|P|` over a
/// candidate pool, so quotients are not dominated by division noise.
fn select_frames(p: &HPolynomial, count: usize, stream: RngStream) -> Result<(Vec<StiefelFrame>, f64)> {
    let mut rng = stream.rng();
    let pool: Vec<StiefelFrame> = (0..20 * count.max(1))
        .map(|_| sample_stiefel(p.n(), p.m(), &mut rng))
        .collect::<Result<_>>()?;
    let mut mags: Vec<f64> = pool.iter().map(|u| p.eval(u.matrix()).norm()).collect();
    mags.sort_by(|a, b| a.total_cmp(b));
    let threshold = 0.05 * mags[(mags.len() * 9) / 10];
    let chosen: Vec<StiefelFrame> = pool
        .into_iter()
        .filter(|u| p.eval(u.matrix()).norm() >= threshold && threshold > 0.0)
        .take(count)
        .collect();
    if chosen.is_empty() {
        return Err(Error::ThresholdNotMet { threshold });
    }
    Ok((chosen, threshold))
}

/// Checks `(T^λ P_k)(u) = c μ_k(λ) P_k(u)` on `n_frames` random frames.
pub fn eigen_relation_check(
    p: &HPolynomial,
    lambda: &MultiIndex,
    n_frames: usize,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<EigenReport> {
    let (n, m, k) = (p.n(), p.m(), p.degree());
    if k % 2 == 1 {
        return Err(dims("the eigenvalue relation is checked for even degrees only"));
    }
    check_domain(lambda, m, false)?;
    let multiplier = multiplier_mu(lambda, k, n);
    let expected = multiplier_constant(n, m, k) * multiplier.value().unwrap_or(C64::new(f64::NAN, 0.0));
    let (frames, threshold) = select_frames(p, n_frames, RngStream::new(config.seed, 0).derive(0xF4A3))?;
    let mut quotients = Vec::with_capacity(frames.len());
    for (i, u) in frames.iter().enumerate() {
        let pu = p.eval(u.matrix());
        let est = cosine_transform(p, lambda, u, &config.derive(i as u64 + 1), exec, false)?;
        quotients.push(FrameQuotient {
            p_value: pu,
            quotient: est.value / pu,
            stderr: est.stderr / pu.norm(),
            skipped_fraction: est.skipped_fraction(),
        });
    }
    let mean: C64 = quotients.iter().map(|q| q.quotient).sum::<C64>() / quotients.len() as f64;
    let dispersion = quotients
        .iter()
        .map(|q| {
            let d = q.quotient - mean;
            d.re.abs().max(d.im.abs())
        })
        .fold(0.0, f64::max);
    let max_stderr = quotients.iter().map(|q| q.stderr).fold(0.0, f64::max);
    Ok(EigenReport {
        expected,
        multiplier,
        threshold,
        frames: quotients,
        dispersion,
        max_stderr,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilationReport {
    pub multiplier: TaggedValue,
    pub frames: Vec<McEstimate>,
}

impl AnnihilationReport {
    pub fn comparisons(&self, label: &str) -> Vec<Comparison> {
        let mut out = alloc::vec![Comparison::condition(
            alloc::format!("{label}/multiplier_is_zero"),
            self.multiplier.is_zero()
        )];
        out.extend(self.frames.iter().enumerate().map(|(i, e)| {
            Comparison::estimate_vs_value(alloc::format!("{label}/frame{i}"), e, C64::new(0.0, 0.0))
        }));
        out
    }

    pub fn pass(&self) -> bool {
        self.comparisons("").iter().all(|c| c.pass)
    }
}

/// Estimates `(T^λ P_k)(u)` at `n_frames` random frames for a `λ` where the
/// multiplier should vanish.
pub fn annihilation_check(
    p: &HPolynomial,
    lambda: &MultiIndex,
    n_frames: usize,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<AnnihilationReport> {
    let (n, m) = (p.n(), p.m());
    check_domain(lambda, m, false)?;
    let mut rng = RngStream::new(config.seed, 0).derive(0xA11).rng();
    let frames = (0..n_frames)
        .map(|i| {
            let u = sample_stiefel(n, m, &mut rng)?;
            cosine_transform(p, lambda, &u, &config.derive(i as u64 + 1), exec, false)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnnihilationReport {
        multiplier: multiplier_mu(lambda, p.degree(), n),
        frames,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerpReport {
    /// `(T^λ f)(u) / σ_{n,m}`.
    pub direct: McEstimate,
    /// `(T_⊥^λ f_⊥)(u_⊥) / σ_{n,n-m}`.
    pub complement: McEstimate,
}

impl PerpReport {
    pub fn comparison(&self, label: &str) -> Comparison {
        Comparison::estimates(label, &self.direct, &self.complement)
    }
}

/// Compares `T^λ f` at `u` with the transform on the complementary
/// Grassmannian: `f_⊥(w) = F(I - ww')` for `f(v) = F(vv')`, evaluated at
/// `u_⊥`. Both sides are divided by their total masses.
pub fn perp_duality_check(
    f: &ProjectorFunction,
    lambda: C64,
    u: &StiefelFrame,
    config: &McConfig,
    exec: &dyn Executor,
) -> Result<PerpReport> {
    let n = u.n();
    let u_perp = u.complement()?;
    let complement_fn = ComplementFunction { inner: f, n };
    let direct = det_cosine_transform(f, lambda, u, config, exec, false)?
        .scale(C64::new(1.0 / stiefel_volume(n, u.m())?, 0.0));
    let complement = det_cosine_transform(&complement_fn, lambda, &u_perp, &config.derive(1), exec, false)?
        .scale(C64::new(1.0 / stiefel_volume(n, n - u.m())?, 0.0));
    Ok(PerpReport { direct, complement })
}

struct ComplementFunction<'a> {
    inner: &'a ProjectorFunction,
    n: usize,
}

impl AngleFunction for ComplementFunction<'_> {
    fn eval(&self, w: &Matrix) -> C64 {
        let p = Matrix::identity(self.n).sub(&w.matmul(&w.transpose()));
        self.inner.eval_projector(&p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::gaussian_matrix;
    use crate::mc::Sequential;
    use crate::special::average_closed_form;
    use crate::transforms::One;
    use core::f64::consts::PI;

    fn cfg(seed: u64, samples: u64) -> McConfig {
        McConfig::new(seed, samples, 2)
    }

    #[test]
    fn zero_index_gives_volume() {
        let u = StiefelFrame::standard(4, 2).unwrap();
        let est = cosine_transform(&One, &MultiIndex::zeros(2), &u, &cfg(1, 1000), &Sequential, false).unwrap();
        assert!((est.value.re - stiefel_volume(4, 2).unwrap()).abs() < 1e-9);
        let est = det_cosine_transform(&One, C64::new(0.0, 0.0), &u, &cfg(1, 1000), &Sequential, false).unwrap();
        assert!((est.value.re - stiefel_volume(4, 2).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn domain_is_enforced() {
        let u = StiefelFrame::standard(4, 2).unwrap();
        let lam = MultiIndex::real(&[-3.0, -3.0]);
        assert!(matches!(
            cosine_transform(&One, &lam, &u, &cfg(1, 10), &Sequential, false),
            Err(Error::ConvergenceDomain(_))
        ));
        let est = cosine_transform(&One, &lam, &u, &cfg(1, 10), &Sequential, true).unwrap();
        assert!(est.diverges);
    }

    #[test]
    fn average_identity_including_tilted_case() {
        let u = StiefelFrame::standard(4, 2).unwrap();
        for (i, l) in [[1.0, 1.0], [2.0, 0.5], [0.5, -0.5]].iter().enumerate() {
            let lam = MultiIndex::real(l);
            let est = cosine_transform(&One, &lam, &u, &cfg(10 + i as u64, 100_000), &Sequential, false).unwrap();
            let want = average_closed_form(&lam, 4).finite().unwrap();
            assert!((est.value - want).norm() < 5.0 * est.stderr, "{l:?}: {} vs {want}", est.value);
        }
    }

    #[test]
    fn det_path_matches_composite_path() {
        let mut rng = RngStream::new(5, 0).rng();
        for i in 0..3 {
            let u = sample_stiefel(5, 2, &mut rng).unwrap();
            let f = ProjectorFunction::diagonal_entry(0);
            let a = cosine_transform(&f, &MultiIndex::constant_real(0.7, 2), &u, &cfg(20 + i, 50_000), &Sequential, false).unwrap();
            let b = det_cosine_transform(&f, C64::new(0.7, 0.0), &u, &cfg(40 + i, 50_000), &Sequential, false).unwrap();
            assert!(Comparison::estimates("x", &a, &b).holds_at(5.0));
        }
    }

    #[test]
    fn radial_extension_scaling_and_direct_route() {
        let u = StiefelFrame::standard(4, 2).unwrap();
        let lam = MultiIndex::real(&[1.0, 0.5]);
        let f = ProjectorFunction::diagonal_entry(0);
        let c = cfg(7, 50_000);
        let base = cosine_transform(&f, &lam, &u, &c, &Sequential, false).unwrap();
        let scaled = radial_extension(&f, &lam, &u.matrix().scale(2.0), &c, &Sequential).unwrap();
        let factor = composite_power(&PosDefMatrix::new(Matrix::identity(2).scale(4.0)).unwrap(), &lam);
        assert!((scaled.value - base.value * factor).norm() < 1e-9 * scaled.value.norm());
        let y = gaussian_matrix(4, 2, &mut RngStream::new(8, 0).rng());
        let a = radial_extension(&f, &lam, &y, &c, &Sequential).unwrap();
        let b = cosine_transform_at(&f, &lam, &y, &c.derive(3), &Sequential).unwrap();
        assert!(Comparison::estimates("radial", &a, &b).holds_at(5.0), "{} vs {}", a.value, b.value);
    }

    #[test]
    fn rank_one_funk_hecke() {
        let p = HPolynomial::new(3, 1, 2).unwrap();
        let rep = eigen_relation_check(&p, &MultiIndex::real(&[1.0]), 3, &cfg(9, 100_000), &Sequential).unwrap();
        assert!((rep.expected - C64::new(PI / 2.0, 0.0)).norm() < 1e-12);
        assert!(rep.comparisons("").iter().all(|c| c.holds_at(5.0)), "{rep:?}");
    }

    #[test]
    fn rank_one_null_at_zero() {
        let p = HPolynomial::new(3, 1, 2).unwrap();
        let rep = annihilation_check(&p, &MultiIndex::real(&[0.0]), 3, &cfg(11, 50_000), &Sequential).unwrap();
        assert!(rep.comparisons("").iter().all(|c| c.holds_at(5.0)), "{rep:?}");
    }

    #[test]
    fn perp_duality_constant_function() {
        let f = ProjectorFunction::new(|_| C64::new(1.0, 0.0));
        let u = StiefelFrame::standard(4, 1).unwrap();
        let rep = perp_duality_check(&f, C64::new(1.0, 0.0), &u, &cfg(12, 50_000), &Sequential).unwrap();
        assert!((rep.direct.value.re - 4.0 / (3.0 * PI)).abs() < 5.0 * rep.direct.stderr);
        assert!(rep.comparison("one").holds_at(5.0));
        // Closed forms on both sides agree.
        let a = average_closed_form(&MultiIndex::constant_real(1.0, 1), 4).finite().unwrap() / stiefel_volume(4, 1).unwrap();
        let b = average_closed_form(&MultiIndex::constant_real(1.0, 3), 4).finite().unwrap() / stiefel_volume(4, 3).unwrap();
        assert!((a - b).norm() < 1e-10 * a.norm());
    }

    #[test]
    fn eigen_check_rejects_odd_degree() {
        let p = HPolynomial::new(4, 2, 1).unwrap();
        assert!(eigen_relation_check(&p, &MultiIndex::real(&[1.0, 1.0]), 2, &cfg(1, 10), &Sequential).is_err());
    }
}
