//! Seeded, partitioned Monte Carlo.
//!
//! A run of `samples` draws is split into `partitions` contiguous blocks.
//! Block `i` draws from its own ChaCha stream `(seed, i)` and accumulates
//! Welford moments; the blocks are merged by a fixed-order pairwise tree, so
//! the estimate depends only on `(seed, samples, partitions)` and not on how
//! the blocks were scheduled.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::C64;

/// The generator handed to integrands.
pub type Rng = ChaCha8Rng;

/// A `(seed, stream_id)` pair naming a reproducible sample sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn rng(&self) -> Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// A stream for an independent sub-task; distinct `tag`s give distinct
    /// seeds.
    pub fn derive(&self, tag: u64) -> RngStream {
        // splitmix64 finalizer
        let mut z = self
            .seed
            .wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
            .wrapping_add(self.stream_id.rotate_left(32));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RngStream::new(z ^ (z >> 31), 0)
    }
}

/// Sample budget and partitioning of one estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub seed: u64,
    pub samples: u64,
    pub partitions: usize,
}

impl McConfig {
    pub fn new(seed: u64, samples: u64, partitions: usize) -> Self {
        McConfig {
            seed,
            samples,
            partitions: partitions.max(1),
        }
    }

    pub fn with_samples(&self, samples: u64) -> Self {
        McConfig { samples, ..*self }
    }

    /// Same budget on an independent stream family.
    pub fn derive(&self, tag: u64) -> Self {
        McConfig {
            seed: RngStream::new(self.seed, 0).derive(tag).seed,
            ..*self
        }
    }

    fn partition_len(&self, i: usize) -> u64 {
        let p = self.partitions as u64;
        self.samples / p + u64::from((i as u64) < self.samples % p)
    }
}

/// Running mean and second central moment of complex samples, plus a count
/// of degenerate samples that were skipped.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Accumulator {
    pub count: u64,
    pub skipped: u64,
    mean: C64,
    m2_re: f64,
    m2_im: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: C64) {
        self.count += 1;
        let n = self.count as f64;
        let d = x - self.mean;
        self.mean += d / n;
        let d2 = x - self.mean;
        self.m2_re += d.re * d2.re;
        self.m2_im += d.im * d2.im;
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    /// Chan's parallel update.
    pub fn merge(&self, other: &Accumulator) -> Accumulator {
        let n = self.count + other.count;
        if n == 0 {
            return Accumulator {
                skipped: self.skipped + other.skipped,
                ..Accumulator::default()
            };
        }
        let (na, nb, nf) = (self.count as f64, other.count as f64, n as f64);
        let d = other.mean - self.mean;
        Accumulator {
            count: n,
            skipped: self.skipped + other.skipped,
            mean: self.mean + d * (nb / nf),
            m2_re: self.m2_re + other.m2_re + d.re * d.re * na * nb / nf,
            m2_im: self.m2_im + other.m2_im + d.im * d.im * na * nb / nf,
        }
    }

    pub fn estimate(&self) -> McEstimate {
        let n = self.count as f64;
        let var = |m2: f64| if self.count > 1 { m2 / (n - 1.0) } else { 0.0 };
        let se_re = (var(self.m2_re) / n).sqrt();
        let se_im = (var(self.m2_im) / n).sqrt();
        McEstimate {
            value: self.mean,
            stderr: if self.count > 0 { se_re.max(se_im) } else { f64::INFINITY },
            samples: self.count,
            skipped: self.skipped,
            diverges: false,
        }
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub value: C64,
    /// Max of the real and imaginary standard errors.
    pub stderr: f64,
    pub samples: u64,
    pub skipped: u64,
    /// Set when the integral was forced outside its convergence domain; the
    /// numbers are then not meaningful.
    pub diverges: bool,
}

impl McEstimate {
    /// An exact value (zero variance).
    pub fn exact(value: C64) -> Self {
        McEstimate {
            value,
            stderr: 0.0,
            samples: 0,
            skipped: 0,
            diverges: false,
        }
    }

    /// Multiplies by a constant; the error bound scales by `|c|`.
    pub fn scale(&self, c: C64) -> Self {
        McEstimate {
            value: self.value * c,
            stderr: self.stderr * c.norm(),
            ..*self
        }
    }

    pub fn skipped_fraction(&self) -> f64 {
        let total = self.samples + self.skipped;
        if total == 0 {
            0.0
        } else {
            self.skipped as f64 / total as f64
        }
    }
}

/// Runs independent partitions of a Monte Carlo job. Implementations may
/// run them in any order or concurrently but must return results indexed by
/// partition.
pub trait Executor: Sync {
    fn run(
        &self,
        partitions: usize,
        job: &(dyn Fn(usize) -> Result<Accumulator> + Sync),
    ) -> Vec<Result<Accumulator>>;
}

/// Runs partitions one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run(
        &self,
        partitions: usize,
        job: &(dyn Fn(usize) -> Result<Accumulator> + Sync),
    ) -> Vec<Result<Accumulator>> {
        (0..partitions).map(job).collect()
    }
}

fn tree_merge(mut parts: Vec<Accumulator>) -> Accumulator {
    if parts.is_empty() {
        return Accumulator::default();
    }
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|c| if c.len() == 2 { c[0].merge(&c[1]) } else { c[0] })
            .collect();
    }
    parts[0]
}

/// Mean of `sample(rng)` over `config.samples` draws.
///
/// Draws for which `sample` fails with a degenerate-sample error are skipped
/// and counted; any other error aborts the run.
pub fn estimate_mean(
    config: &McConfig,
    exec: &dyn Executor,
    sample: &(dyn Fn(&mut Rng) -> Result<C64> + Sync),
) -> Result<McEstimate> {
    let job = |i: usize| -> Result<Accumulator> {
        let mut rng = RngStream::new(config.seed, i as u64).rng();
        let mut acc = Accumulator::default();
        for _ in 0..config.partition_len(i) {
            match sample(&mut rng) {
                Ok(v) => acc.push(v),
                Err(e) if e.is_degenerate_sample() => acc.skip(),
                Err(e) => return Err(e),
            }
        }
        Ok(acc)
    };
    let parts = exec
        .run(config.partitions, &job)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(tree_merge(parts).estimate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use rand::Rng as _;

    fn uniform(rng: &mut Rng) -> Result<C64> {
        Ok(C64::new(rng.random::<f64>(), 0.0))
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = RngStream::new(7, 3).rng().random();
        let b: u64 = RngStream::new(7, 3).rng().random();
        let c: u64 = RngStream::new(7, 4).rng().random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<C64> = (0..101).map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64).sqrt())).collect();
        let mut acc = Accumulator::default();
        xs.iter().for_each(|&x| acc.push(x));
        let n = xs.len() as f64;
        let mean: C64 = xs.iter().sum::<C64>() / n;
        let var_re = xs.iter().map(|x| (x.re - mean.re).powi(2)).sum::<f64>() / (n - 1.0);
        let var_im = xs.iter().map(|x| (x.im - mean.im).powi(2)).sum::<f64>() / (n - 1.0);
        let est = acc.estimate();
        assert!((est.value - mean).norm() < 1e-14);
        assert!((est.stderr - (var_re.max(var_im) / n).sqrt()).abs() < 1e-14);
        // Merge of two halves equals the single pass.
        let (mut a, mut b) = (Accumulator::default(), Accumulator::default());
        xs[..40].iter().for_each(|&x| a.push(x));
        xs[40..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(&b).estimate();
        assert!((merged.value - est.value).norm() < 1e-14);
        assert!((merged.stderr - est.stderr).abs() < 1e-14);
    }

    #[test]
    fn estimate_is_deterministic_and_correct() {
        let cfg = McConfig::new(42, 100_000, 7);
        let a = estimate_mean(&cfg, &Sequential, &uniform).unwrap();
        let b = estimate_mean(&cfg, &Sequential, &uniform).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 100_000);
        assert!((a.value.re - 0.5).abs() < 4.0 * a.stderr);
        let expected_se = (1.0f64 / 12.0 / 100_000.0).sqrt();
        assert!((a.stderr / expected_se - 1.0).abs() < 0.02);
    }

    #[test]
    fn degenerate_samples_are_skipped_other_errors_propagate() {
        let cfg = McConfig::new(1, 1000, 3);
        let est = estimate_mean(&cfg, &Sequential, &|rng: &mut Rng| {
            if rng.random::<f64>() < 0.1 {
                Err(Error::RankDeficient { expected: 2 })
            } else {
                Ok(C64::new(1.0, 0.0))
            }
        })
        .unwrap();
        assert_eq!(est.samples + est.skipped, 1000);
        assert!(est.skipped > 50 && est.skipped < 150);
        let err = estimate_mean(&cfg, &Sequential, &|_: &mut Rng| Err(Error::ThresholdNotMet { threshold: 1.0 }));
        assert!(err.is_err());
    }
}
