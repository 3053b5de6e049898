//! Exact sampler for the uniform distribution on the scaled simplex
//! `{x_j >= 0, sum x_j = 2m^2}`, and indicator statistics over its samples.
//!
//! Sampling normalises `m` independent standard exponentials (inverse CDF on
//! MT19937 uniforms), which is uniform with respect to Lebesgue measure on the
//! simplex. Indicators use `x_j <= T^2`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::experiments::{McConfig, McReport};
use crate::rng::{Mt19937, SeedPlan};
use crate::stats::{batch_range, count_variance, CompensatedSum};
use crate::theory::{self, TheoryParams};

/// One point of the simplex, `m` energies summing to `2m^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSample {
    energies: Vec<f64>,
}

impl SimplexSample {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn m(&self) -> usize {
        self.energies.len()
    }

    /// Number of coordinates with energy `<= t2`.
    pub fn count_at_most(&self, t2: f64) -> usize {
        self.energies.iter().filter(|&&e| e <= t2).count()
    }
}

pub fn sample(m: usize, rng: &mut Mt19937) -> Result<SimplexSample> {
    if m < 2 {
        return Err(Error::Config(format!("simplex needs m >= 2, got {m}")));
    }
    let raw: Vec<f64> = (0..m).map(|_| rng.next_exp()).collect();
    let total: f64 = raw.iter().copied().collect::<CompensatedSum>().value();
    let scale = 2.0 * (m as f64) * (m as f64) / total;
    Ok(SimplexSample {
        energies: raw.into_iter().map(|e| e * scale).collect(),
    })
}

/// Empirical indicator statistics of `F_j = 1{x_j <= T^2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorStats {
    pub m: usize,
    pub samples: usize,
    /// `E[F]`, pooled over coordinates and samples.
    pub mean: f64,
    /// `V[F] = E[F](1 - E[F])`.
    pub variance: f64,
    /// `Cov[F_i, F_j]` averaged over all ordered pairs `i != j`.
    pub covariance: f64,
    /// `None` when the indicator variance is zero.
    pub correlation: Option<f64>,
    /// Unbiased sample variance of `N1 = sum_j F_j`.
    pub n1_variance: f64,
}

impl IndicatorStats {
    /// Builds the statistics from per-sample counts `N1`. Pairwise products
    /// follow from the counts: `sum_{i != j} F_i F_j = N1 (N1 - 1)`.
    pub fn from_counts(m: usize, counts: &[u32]) -> Self {
        let len = counts.len() as f64;
        let mf = m as f64;
        let total: u64 = counts.iter().map(|&c| u64::from(c)).sum();
        let pairs: u64 = counts
            .iter()
            .map(|&c| u64::from(c) * u64::from(c).saturating_sub(1))
            .sum();
        let mean = total as f64 / (len * mf);
        let variance = mean * (1.0 - mean);
        let both = pairs as f64 / (len * mf * (mf - 1.0));
        let covariance = both - mean * mean;
        let correlation = (variance > 0.0).then(|| covariance / variance);
        let n1_variance = if counts.len() > 1 {
            count_variance(counts)
        } else {
            0.0
        };
        Self {
            m,
            samples: counts.len(),
            mean,
            variance,
            covariance,
            correlation,
            n1_variance,
        }
    }
}

/// Draws `n_samples` points from one generator stream.
pub fn indicator_stats(
    m: usize,
    t2: f64,
    n_samples: usize,
    rng: &mut Mt19937,
) -> Result<IndicatorStats> {
    if n_samples < 1000 {
        return Err(Error::Config(format!(
            "indicator statistics need at least 1000 samples, got {n_samples}"
        )));
    }
    let counts = (0..n_samples)
        .map(|_| sample(m, rng).map(|s| s.count_at_most(t2) as u32))
        .collect::<Result<Vec<u32>>>()?;
    Ok(IndicatorStats::from_counts(m, &counts))
}

/// Simplex sample counts with one seeded generator per sample.
pub fn seeded_counts<E: Executor>(
    m: usize,
    t2: f64,
    n_samples: usize,
    master_seed: u32,
    exec: &E,
) -> Result<Vec<u32>> {
    if m < 2 {
        return Err(Error::Config(format!("simplex needs m >= 2, got {m}")));
    }
    Ok(exec.map(n_samples, |i| {
        let mut rng = SeedPlan::new(master_seed, i as u64).generator();
        sample(m, &mut rng).expect("m validated").count_at_most(t2) as u32
    }))
}

/// Batched comparison of empirical and closed-form indicator statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexReport {
    pub m: usize,
    pub t2: f64,
    pub pooled: IndicatorStats,
    pub variance: McReport,
    pub correlation: McReport,
    pub n1_variance: McReport,
}

/// Runs `config.n_sequences` samples at `m = config.n / 2` with the LOG_005
/// threshold, split into `config.batches` batches for standard errors.
pub fn verify_closed_forms<E: Executor>(config: &McConfig, exec: &E) -> Result<SimplexReport> {
    config.validate()?;
    let m = config.n / 2;
    let params = TheoryParams::log005(m as u64)?;
    let closed = theory::quantities(&params)?;
    let counts = seeded_counts(m, params.t2(), config.n_sequences, config.master_seed, exec)?;
    let per_batch: Vec<IndicatorStats> = (0..config.batches)
        .map(|b| {
            IndicatorStats::from_counts(m, &counts[batch_range(counts.len(), config.batches, b)])
        })
        .collect();
    let collect = |f: &dyn Fn(&IndicatorStats) -> Option<f64>, reference: f64, what: &str| {
        let values = per_batch
            .iter()
            .map(|s| f(s).ok_or_else(|| Error::ZeroVariance(format!("{what} in a batch"))))
            .collect::<Result<Vec<f64>>>()?;
        McReport::from_batches(values, config.clone(), Some(reference))
    };
    Ok(SimplexReport {
        m,
        t2: params.t2(),
        pooled: IndicatorStats::from_counts(m, &counts),
        variance: collect(&|s| Some(s.variance), closed.v_f, "V[F]")?,
        correlation: collect(&|s| s.correlation, closed.corr_ff, "C[F_i,F_j]")?,
        n1_variance: collect(&|s| Some(s.n1_variance), closed.var_n1, "V[N1]")?,
    })
}
