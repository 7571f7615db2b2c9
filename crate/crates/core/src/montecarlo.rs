//! Seeded Monte Carlo estimates for sizes beyond enumeration.
//!
//! # Random stream
//!
//! Samples are drawn from ChaCha8 (`rand_chacha::ChaCha8Rng`), whose output
//! stream is fixed by the ChaCha specification and independent of platform.
//! Sample indices are grouped into blocks of [`BLOCK_SIZE`]; block `b` uses
//! the generator seeded with `seed_from_u64(seed)` on stream `b`. A sampled
//! function draws its images in domain order, and a chain draws `f_1` first.
//! Images are uniform on `0..m` by Lemire's multiply-and-reject method, see
//! [`uniform_below`].
//!
//! Per-sample statistics are integers (`sum_y |fiber|^2` or the largest
//! fiber), summed exactly per block and then across blocks, so a report is
//! a function of `(seed, samples, sizes)` alone, whatever the thread count.

use num_bigint::{BigInt, BigUint};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{expected_degree_chain, expected_degree_iterate, iterate_limit};
use crate::function::{fiber_sizes_of, sum_of_squares};
use crate::{ChainSpec, Error, FiniteFunction, Rational, Result};

/// Samples per independent generator stream.
pub const BLOCK_SIZE: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub samples: u64,
    /// Worker threads; 1 runs on the calling thread.
    pub threads: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, samples: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidSize("need at least one sample".into()));
        }
        Ok(SamplerConfig {
            seed,
            samples,
            threads: 1,
        })
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    /// Exact sample mean.
    pub sample_mean: Rational,
    pub mean: f64,
    /// Standard deviation of the sample (n - 1 denominator) over `sqrt(samples)`.
    pub std_error: f64,
    pub closed_form: Option<Rational>,
    pub z_score: Option<f64>,
    /// `mean / (ln n / ln ln n)`, for max-fiber estimates.
    pub log_ratio: Option<f64>,
    pub samples: u64,
    pub seed: u64,
}

impl EstimateReport {
    /// `(mean - reference) / std_error`, absent when the standard error is 0.
    pub fn z_against(&self, reference: &Rational) -> Option<f64> {
        (self.std_error > 0.0).then(|| (&self.sample_mean - reference).to_f64() / self.std_error)
    }
}

/// Uniform integer in `0..bound`, without modulo bias.
///
/// Draws `x = next_u64()` and forms the 128-bit product `x * bound`; the high
/// word is the result unless the low word falls below `2^64 mod bound`, in
/// which case `x` is redrawn.
pub fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0, "empty range");
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let wide = u128::from(rng.next_u64()) * u128::from(bound);
        if (wide as u64) >= threshold {
            return (wide >> 64) as u64;
        }
    }
}

fn sample_images<R: RngCore + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<usize> {
    (0..n)
        .map(|_| uniform_below(rng, m as u64) as usize)
        .collect()
}

/// A uniformly random function `{0..n} -> {0..m}`.
pub fn sample_function<R: RngCore + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<FiniteFunction> {
    if n == 0 || m == 0 {
        return Err(Error::EmptySet);
    }
    Ok(FiniteFunction::from_parts_unchecked(
        m,
        sample_images(n, m, rng),
    ))
}

/// Generator for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

#[derive(Default)]
struct Moments {
    sum: BigUint,
    sum_sq: BigUint,
}

/// Sums an integer statistic and its square over `config.samples` draws.
fn run_blocks<F>(config: &SamplerConfig, statistic: F) -> Result<Moments>
where
    F: Fn(&mut ChaCha8Rng) -> u128 + Sync,
{
    let blocks = config.samples.div_ceil(BLOCK_SIZE);
    let block = |b: u64| -> Moments {
        let mut rng = block_rng(config.seed, b);
        let len = BLOCK_SIZE.min(config.samples - b * BLOCK_SIZE);
        let mut moments = Moments::default();
        for _ in 0..len {
            let x = statistic(&mut rng);
            moments.sum += x;
            moments.sum_sq += BigUint::from(x) * x;
        }
        moments
    };
    let merge = |mut a: Moments, b: Moments| {
        a.sum += b.sum;
        a.sum_sq += b.sum_sq;
        a
    };
    if config.threads <= 1 {
        return Ok((0..blocks).map(block).fold(Moments::default(), merge));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidSize(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(block)
            .reduce(Moments::default, merge)
    }))
}

/// Builds a report for samples `X = statistic / scale`.
fn summarize(
    moments: Moments,
    scale: u64,
    config: &SamplerConfig,
    closed_form: Option<Rational>,
) -> EstimateReport {
    let n = BigInt::from(config.samples);
    let sum = BigInt::from(moments.sum);
    let sum_sq = BigInt::from(moments.sum_sq);
    let scale = BigInt::from(scale);
    let sample_mean = Rational::new(sum.clone(), &n * &scale);
    let std_error = if config.samples > 1 {
        // var = (N sum_sq - sum^2) / (N (N-1) scale^2), std_error^2 = var / N
        let numerator = &n * sum_sq - &sum * &sum;
        let denominator = &n * &n * (&n - 1) * &scale * &scale;
        Rational::new(numerator, denominator).to_f64().sqrt()
    } else {
        0.0
    };
    let mut report = EstimateReport {
        mean: sample_mean.to_f64(),
        sample_mean,
        std_error,
        closed_form: None,
        z_score: None,
        log_ratio: None,
        samples: config.samples,
        seed: config.seed,
    };
    if let Some(reference) = closed_form {
        report.z_score = report.z_against(&reference);
        report.closed_form = Some(reference);
    }
    report
}

/// Estimates the expected degree of `f_t ∘ .. ∘ f_1` along the chain, with
/// the closed form as reference.
pub fn estimate_expected_degree_chain(
    spec: &ChainSpec,
    config: &SamplerConfig,
) -> Result<EstimateReport> {
    let sizes = spec.sizes().to_vec();
    let moments = run_blocks(config, |rng| {
        let mut composite = sample_images(sizes[0], sizes[1], rng);
        for w in sizes[1..].windows(2) {
            let step = sample_images(w[0], w[1], rng);
            for x in composite.iter_mut() {
                *x = step[*x];
            }
        }
        sum_of_squares(&fiber_sizes_of(&composite, spec.last()))
    })?;
    Ok(summarize(
        moments,
        spec.first() as u64,
        config,
        Some(expected_degree_chain(spec)),
    ))
}

/// Estimates the expected largest fiber of a random endofunction of an
/// `n`-set. No closed form is attached; `log_ratio` compares the mean with
/// `ln n / ln ln n`.
pub fn estimate_max_fiber_mean(n: usize, config: &SamplerConfig) -> Result<EstimateReport> {
    if n < 3 {
        return Err(Error::InvalidSize(format!(
            "max-fiber estimate needs n >= 3, got {n}"
        )));
    }
    let moments = run_blocks(config, |rng| {
        let images = sample_images(n, n, rng);
        fiber_sizes_of(&images, n).into_iter().max().unwrap_or(0) as u128
    })?;
    let mut report = summarize(moments, 1, config, None);
    let ln = (n as f64).ln();
    report.log_ratio = Some(report.mean / (ln / ln.ln()));
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub value: Rational,
    /// `(t + 1) - value`.
    pub gap: Rational,
}

/// Exact expected degree of `t` composed endofunctions for each `n`, with its
/// distance to the limit `t + 1`.
pub fn convergence_table(t: usize, n_values: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let limit = iterate_limit(t);
    n_values
        .iter()
        .map(|&n| {
            let value = expected_degree_iterate(n, t)?;
            Ok(ConvergenceRow {
                n,
                gap: &limit - &value,
                value,
            })
        })
        .collect()
}
