//! Numerical experiments on real spectra.
//!
//! Every randomized harness draws sequence `i` from its own generator seeded by
//! [`SeedPlan`] and reduces per-sequence results in index order, so a report
//! depends only on its [`McConfig`], never on the executor.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::bitseq::BitSequence;
use crate::dft_test::{count_below, ThresholdRule};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::rng::SeedPlan;
use crate::special::normal_cdf;
use crate::spectrum::{dft_naive, FftPlan};
use crate::stats::{self, batch_range, count_variance, BatchSummary, CompensatedSum};
use crate::theory::{self, TheoryParams};

/// Scale of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct McConfig {
    /// Bits per sequence.
    pub n: usize,
    pub n_sequences: usize,
    pub master_seed: u32,
    pub batches: usize,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "n must be even and at least 2, got {}",
                self.n
            )));
        }
        if self.batches < 2 {
            return Err(Error::Config(format!(
                "need at least 2 batches, got {}",
                self.batches
            )));
        }
        if self.n_sequences < 10 * self.batches {
            return Err(Error::Config(format!(
                "need at least 10 sequences per batch ({} sequences, {} batches)",
                self.n_sequences, self.batches
            )));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.n / 2
    }
}

/// A batched Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    /// Mean of `per_batch`.
    pub estimate: f64,
    /// Sample SD of `per_batch` over `sqrt(per_batch.len())`.
    pub stderr: f64,
    pub per_batch: Vec<f64>,
    pub config: McConfig,
    /// Closed-form value the estimate is compared against, when defined.
    pub reference: Option<f64>,
    pub warnings: Vec<String>,
}

impl McReport {
    pub fn from_batches(
        per_batch: Vec<f64>,
        config: McConfig,
        reference: Option<f64>,
    ) -> Result<Self> {
        if per_batch.len() < 2 {
            return Err(Error::ZeroVariance(format!(
                "only {} usable batches",
                per_batch.len()
            )));
        }
        let BatchSummary { estimate, stderr } = BatchSummary::of(&per_batch);
        Ok(Self {
            estimate,
            stderr,
            per_batch,
            config,
            reference,
            warnings: Vec::new(),
        })
    }

    /// `|estimate - reference| / stderr`, if a reference exists.
    pub fn z_score(&self) -> Option<f64> {
        self.reference
            .map(|r| libm::fabs(self.estimate - r) / self.stderr)
    }
}

/// Sequence `index` of a run: `n` MT19937 bits from seed `master + index`.
pub fn mt_sequence(n: usize, master_seed: u32, index: usize) -> Result<BitSequence> {
    SeedPlan::new(master_seed, index as u64)
        .generator()
        .random_bitsequence(n)
}

/// `N1` under `rule` for every sequence of the run.
pub fn n1_counts<E: Executor>(
    config: &McConfig,
    rule: ThresholdRule,
    exec: &E,
) -> Result<Vec<u32>> {
    config.validate()?;
    let plan = FftPlan::new(config.n)?;
    let threshold = rule.value(config.n);
    exec.map(config.n_sequences, |i| {
        let seq = mt_sequence(config.n, config.master_seed, i)?;
        let spec = plan.magnitudes(&seq.signed())?;
        Ok(count_below(&spec, threshold) as u32)
    })
    .into_iter()
    .collect()
}

/// Per batch, `a = 0.0475 n / V[N1]` with the unbiased sample variance.
pub fn estimate_a_from_counts(config: &McConfig, counts: &[u32]) -> Result<McReport> {
    config.validate()?;
    if counts.len() != config.n_sequences {
        return Err(Error::Config(format!(
            "expected {} counts, got {}",
            config.n_sequences,
            counts.len()
        )));
    }
    let per_batch = (0..config.batches)
        .map(|b| {
            let v = count_variance(&counts[batch_range(counts.len(), config.batches, b)]);
            if v == 0.0 {
                Err(Error::ZeroVariance(format!("N1 is constant in batch {b}")))
            } else {
                Ok(0.95 * 0.05 * config.n as f64 / v)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let reference = TheoryParams::log005(config.m() as u64)
        .and_then(|p| theory::divisor_a(&p))
        .ok();
    McReport::from_batches(per_batch, config.clone(), reference)
}

/// Estimates the divisor `a` from MT19937 sequences with the LOG_005 threshold.
pub fn experiment_variance<E: Executor>(config: &McConfig, exec: &E) -> Result<McReport> {
    let counts = n1_counts(config, ThresholdRule::Log005, exec)?;
    estimate_a_from_counts(config, &counts)
}

/// Empirical correlation of the indicators `F_i = 1{|f_i| < T}` and `F_j`
/// (LOG_005 threshold) over MT19937 sequences.
pub fn experiment_correlation<E: Executor>(
    config: &McConfig,
    i: usize,
    j: usize,
    exec: &E,
) -> Result<McReport> {
    config.validate()?;
    if !(1 <= i && i < j && j < config.m()) {
        return Err(Error::Config(format!(
            "need 1 <= i < j <= n/2 - 1, got i = {i}, j = {j}, n = {}",
            config.n
        )));
    }
    let plan = FftPlan::new(config.n)?;
    let threshold = ThresholdRule::Log005.value(config.n);
    let pairs = exec
        .map(config.n_sequences, |k| {
            let seq = mt_sequence(config.n, config.master_seed, k)?;
            let spec = plan.magnitudes(&seq.signed())?;
            Ok((spec.half()[i] < threshold, spec.half()[j] < threshold))
        })
        .into_iter()
        .collect::<Result<Vec<(bool, bool)>>>()?;

    let mut per_batch = Vec::with_capacity(config.batches);
    let mut warnings = Vec::new();
    for b in 0..config.batches {
        let batch = &pairs[batch_range(pairs.len(), config.batches, b)];
        let len = batch.len() as f64;
        let pi = batch.iter().filter(|p| p.0).count() as f64 / len;
        let pj = batch.iter().filter(|p| p.1).count() as f64 / len;
        let pij = batch.iter().filter(|p| p.0 && p.1).count() as f64 / len;
        let denom = pi * (1.0 - pi) * pj * (1.0 - pj);
        if denom == 0.0 {
            warnings.push(format!("batch {b} excluded: an indicator is constant"));
            continue;
        }
        per_batch.push((pij - pi * pj) / libm::sqrt(denom));
    }
    let reference = TheoryParams::log005(config.m() as u64)
        .and_then(|p| theory::indicator_correlation(&p))
        .ok();
    let mut report = McReport::from_batches(per_batch, config.clone(), reference)?;
    report.warnings = warnings;
    Ok(report)
}

/// Exact moments of one spectral line over all `2^n` sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct LineMoments {
    pub j: usize,
    /// `E[|f_j|^2]`.
    pub mean: f64,
    /// `V[|f_j|^2]`.
    pub variance: f64,
}

/// Exact moments over all `2^n` sequences of length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub n: usize,
    /// Lines `j = 0 ..= n/2`; the last is the Nyquist line.
    pub lines: Vec<LineMoments>,
    /// `N1` under LOG_005.
    pub n1_mean: f64,
    pub n1_variance: f64,
    /// `sum_{j < n/2} |f_j|^2`.
    pub half_energy_mean: f64,
    pub half_energy_variance: f64,
    /// Largest deviation from the half-energy identity over all sequences.
    pub identity_max_error: f64,
    /// Largest deviation of the Parseval energy from `n^2`.
    pub parseval_max_error: f64,
}

impl MomentTable {
    /// `n^2 - 2n`, the variance of `|f_j|^2` for `0 < j < n/2`.
    pub fn interior_line_variance(&self) -> f64 {
        let n = self.n as f64;
        n * n - 2.0 * n
    }

    /// `2n^2 - 2n`, the variance of `|f_0|^2`.
    pub fn dc_variance(&self) -> f64 {
        let n = self.n as f64;
        2.0 * n * n - 2.0 * n
    }
}

pub const EXHAUSTIVE_MAX_N: usize = 16;

/// Enumerates every ±1 sequence of even length `n <= 16` through the direct
/// transform and returns exact (population) moments.
pub fn exhaustive_moments(n: usize) -> Result<MomentTable> {
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::Config(format!(
            "refusing to enumerate 2^{n} sequences; n must be at most {EXHAUSTIVE_MAX_N}"
        )));
    }
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "exhaustive moments need an even n >= 2, got {n}"
        )));
    }
    let lines = n / 2 + 1;
    let threshold = ThresholdRule::Log005.value(n);
    let nn = (n * n) as f64;
    let mut first = vec![CompensatedSum::default(); lines];
    let mut second = vec![CompensatedSum::default(); lines];
    let mut n1_sum = 0u64;
    let mut n1_sq = 0u64;
    let mut energy = CompensatedSum::default();
    let mut energy_sq = CompensatedSum::default();
    let mut identity_max_error: f64 = 0.0;
    let mut parseval_max_error: f64 = 0.0;

    let total = 1usize << n;
    for code in 0..total {
        let signed: Vec<i8> = (0..n)
            .map(|k| if (code >> k) & 1 == 1 { 1 } else { -1 })
            .collect();
        let spec = dft_naive(&signed)?;
        for j in 0..lines {
            let mag = spec.magnitude(j);
            let p = mag * mag;
            first[j].add(p);
            second[j].add(p * p);
        }
        let c = count_below(&spec, threshold) as u64;
        n1_sum += c;
        n1_sq += c * c;
        let e = spec.half_energy();
        energy.add(e);
        energy_sq.add(e * e);
        identity_max_error = identity_max_error.max((e - spec.half_energy_identity()).abs());
        parseval_max_error = parseval_max_error.max((spec.parseval_energy() - nn).abs());
    }

    let count = total as f64;
    let moments = |s1: f64, s2: f64| {
        let mean = s1 / count;
        (mean, s2 / count - mean * mean)
    };
    let lines = (0..lines)
        .map(|j| {
            let (mean, variance) = moments(first[j].value(), second[j].value());
            LineMoments { j, mean, variance }
        })
        .collect();
    let (n1_mean, n1_variance) = moments(n1_sum as f64, n1_sq as f64);
    let (half_energy_mean, half_energy_variance) = moments(energy.value(), energy_sq.value());
    Ok(MomentTable {
        n,
        lines,
        n1_mean,
        n1_variance,
        half_energy_mean,
        half_energy_variance,
        identity_max_error,
        parseval_max_error,
    })
}

/// Sine or cosine coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    Sin,
    Cos,
}

/// One normalised Fourier coefficient, `s_r` or `c_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coefficient {
    pub kind: CoefficientKind,
    pub index: usize,
}

impl core::fmt::Display for Coefficient {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let k = match self.kind {
            CoefficientKind::Sin => 's',
            CoefficientKind::Cos => 'c',
        };
        write!(f, "{k}{}", self.index)
    }
}

/// Empirical distribution checks of `s_1, c_1, ..., s_R, c_R`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalityReport {
    pub config: McConfig,
    pub coefficients: Vec<Coefficient>,
    pub means: Vec<f64>,
    /// Unbiased sample variances.
    pub variances: Vec<f64>,
    pub excess_kurtoses: Vec<f64>,
    /// Kolmogorov-Smirnov distance to the standard normal.
    pub ks_statistics: Vec<f64>,
    /// `(a, b, r)` for every pair `a < b` of coefficient positions.
    pub correlations: Vec<(usize, usize, f64)>,
}

/// Computes `s_r = sqrt(2/n) sum x_k sin(2 pi k r / n)` and `c_r` likewise for
/// `r = 1..=R` over the run's sequences.
pub fn normality_check<E: Executor>(
    config: &McConfig,
    r_max: usize,
    exec: &E,
) -> Result<NormalityReport> {
    config.validate()?;
    let n = config.n;
    if r_max == 0 || 2 * r_max > n / 2 - 1 {
        return Err(Error::Config(format!(
            "need 1 <= R and 2R <= n/2 - 1, got R = {r_max}, n = {n}"
        )));
    }
    let coefficients: Vec<Coefficient> = (1..=r_max)
        .flat_map(|index| {
            [CoefficientKind::Sin, CoefficientKind::Cos].map(|kind| Coefficient { kind, index })
        })
        .collect();
    let scale = libm::sqrt(2.0 / n as f64);
    // basis[c][k] = sqrt(2/n) * sin or cos(2 pi k r / n)
    let basis: Vec<Vec<f64>> = coefficients
        .iter()
        .map(|c| {
            (0..n)
                .map(|k| {
                    let angle = 2.0 * PI * ((k * c.index) % n) as f64 / n as f64;
                    scale
                        * match c.kind {
                            CoefficientKind::Sin => libm::sin(angle),
                            CoefficientKind::Cos => libm::cos(angle),
                        }
                })
                .collect()
        })
        .collect();

    let rows = exec
        .map(config.n_sequences, |i| {
            let seq = mt_sequence(n, config.master_seed, i)?;
            let x = seq.signed();
            Ok(basis
                .iter()
                .map(|b| {
                    x.iter()
                        .zip(b)
                        .map(|(&xk, &bk)| f64::from(xk) * bk)
                        .collect::<CompensatedSum>()
                        .value()
                })
                .collect::<Vec<f64>>())
        })
        .into_iter()
        .collect::<Result<Vec<Vec<f64>>>>()?;

    let columns: Vec<Vec<f64>> = (0..coefficients.len())
        .map(|c| rows.iter().map(|row| row[c]).collect())
        .collect();
    let mut correlations = Vec::new();
    for a in 0..columns.len() {
        for b in a + 1..columns.len() {
            correlations.push((a, b, stats::correlation(&columns[a], &columns[b])));
        }
    }
    Ok(NormalityReport {
        config: config.clone(),
        means: columns.iter().map(|c| stats::mean(c)).collect(),
        variances: columns.iter().map(|c| stats::sample_variance(c)).collect(),
        excess_kurtoses: columns.iter().map(|c| stats::excess_kurtosis(c)).collect(),
        ks_statistics: columns
            .iter()
            .map(|c| stats::ks_statistic(c, normal_cdf))
            .collect(),
        correlations,
        coefficients,
    })
}

/// Outcome of checking `|ln cos x + x^2/2| < c x^4` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub x_max: f64,
    pub c: f64,
    pub grid: usize,
    pub pass: bool,
    /// Largest `|ln cos x + x^2/2| / x^4` on the grid.
    pub max_ratio: f64,
    pub argmax: f64,
    /// The ratio at the smallest grid point.
    pub ratio_at_min: f64,
}

/// `ln cos x + x^2/2` without cancellation: a Taylor series below `1e-3`,
/// `log1p(-2 sin^2(x/2)) + x^2/2` above.
pub fn log_cos_remainder(x: f64) -> f64 {
    let x2 = x * x;
    if libm::fabs(x) < 1e-3 {
        -x2 * x2 * (1.0 / 12.0 + x2 * (1.0 / 45.0 + x2 * 17.0 / 2520.0))
    } else {
        let s = libm::sin(0.5 * x);
        libm::log1p(-2.0 * s * s) + 0.5 * x2
    }
}

/// Checks the quartic bound at `x_max * i / grid` for `i = 1..=grid`.
pub fn lemma_a1_check(x_max: f64, c: f64, grid: usize) -> Result<LemmaReport> {
    if !(x_max > 0.0 && x_max < PI / 2.0) {
        return Err(Error::Config(format!(
            "x_max must lie in (0, pi/2), got {x_max}"
        )));
    }
    if grid == 0 {
        return Err(Error::Config("grid must contain at least one point".into()));
    }
    let ratio = |x: f64| libm::fabs(log_cos_remainder(x)) / (x * x * x * x);
    let mut max_ratio = f64::NEG_INFINITY;
    let mut argmax = 0.0;
    for i in 1..=grid {
        let x = x_max * i as f64 / grid as f64;
        let r = ratio(x);
        if r > max_ratio {
            max_ratio = r;
            argmax = x;
        }
    }
    Ok(LemmaReport {
        x_max,
        c,
        grid,
        pass: max_ratio < c,
        max_ratio,
        argmax,
        ratio_at_min: ratio(x_max / grid as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;

    fn config(n: usize, n_sequences: usize, batches: usize) -> McConfig {
        McConfig {
            n,
            n_sequences,
            master_seed: 2024,
            batches,
        }
    }

    #[test]
    fn config_validation() {
        assert!(config(8, 20, 2).validate().is_ok());
        assert!(config(9, 20, 2).validate().is_err());
        assert!(config(8, 19, 2).validate().is_err());
        assert!(config(8, 100, 1).validate().is_err());
    }

    #[test]
    fn exhaustive_n8() {
        let t = exhaustive_moments(8).unwrap();
        assert!((t.lines[0].variance - 112.0).abs() < 1e-6);
        for j in 1..4 {
            assert!((t.lines[j].variance - 48.0).abs() < 1e-6, "j={j}");
            assert!((t.lines[j].mean - 8.0).abs() < 1e-9);
        }
        // the Nyquist line is real-valued like the DC line
        assert!((t.lines[4].variance - 112.0).abs() < 1e-6);
        assert!(t.half_energy_variance <= 112.0 + 1e-9);
        assert!(t.identity_max_error < 1e-8);
        assert!(t.parseval_max_error < 1e-9);
    }

    #[test]
    fn exhaustive_refuses_large_or_odd() {
        assert!(exhaustive_moments(18).is_err());
        assert!(exhaustive_moments(7).is_err());
        assert!(exhaustive_moments(2).is_ok());
    }

    #[test]
    fn exhaustive_matches_closed_moments_for_all_small_n() {
        for n in (4..=12).step_by(2) {
            let t = exhaustive_moments(n).unwrap();
            assert!((t.lines[0].variance - t.dc_variance()).abs() < 1e-6);
            for line in &t.lines[1..n / 2] {
                assert!(
                    (line.variance - t.interior_line_variance()).abs() < 1e-6,
                    "n={n} j={}",
                    line.j
                );
            }
        }
    }

    #[test]
    fn identical_sequences_give_zero_variance_error() {
        let cfg = config(64, 40, 2);
        let counts = vec![31u32; 40];
        assert!(matches!(
            estimate_a_from_counts(&cfg, &counts),
            Err(Error::ZeroVariance(_))
        ));
    }

    #[test]
    fn correlation_preconditions() {
        let cfg = config(64, 400, 2);
        assert!(experiment_correlation(&cfg, 2, 2, &Sequential).is_err());
        assert!(experiment_correlation(&cfg, 0, 2, &Sequential).is_err());
        assert!(experiment_correlation(&cfg, 1, 32, &Sequential).is_err());
        assert!(experiment_correlation(&cfg, 1, 31, &Sequential).is_ok());
    }

    #[test]
    fn degenerate_correlation_batches_are_flagged() {
        // with n = 8 lines pass or fail in lockstep often enough to see
        // constant indicators in tiny batches
        let cfg = config(8, 40, 4);
        match experiment_correlation(&cfg, 1, 2, &Sequential) {
            Ok(r) => assert_eq!(r.per_batch.len() + r.warnings.len(), 4),
            Err(e) => assert!(matches!(e, Error::ZeroVariance(_))),
        }
    }

    #[test]
    fn lemma_examples() {
        let r = lemma_a1_check(0.5, 0.1, 10_000).unwrap();
        assert!(r.pass);
        assert!((r.max_ratio - 0.089_347_847_099_563_46).abs() < 1e-9);
        assert_eq!(r.argmax, 0.5);
        assert!((r.ratio_at_min - 1.0 / 12.0).abs() < 1e-6);
        let r = lemma_a1_check(0.01, 1.0 / 12.0 - 1e-3, 100).unwrap();
        assert!(!r.pass);
        assert!(lemma_a1_check(1.6, 0.1, 10).is_err());
    }

    #[test]
    fn remainder_is_continuous_at_series_switch() {
        let below = log_cos_remainder(1e-3 * (1.0 - 1e-12));
        let above = log_cos_remainder(1e-3);
        assert!((below - above).abs() / above.abs() < 1e-6);
        // mpmath: ratio at 0.25
        let r = log_cos_remainder(0.25).abs() / 0.25f64.powi(4);
        assert!((r - 0.084_749_119_352_219_57).abs() < 1e-10);
    }

    #[test]
    fn normality_preconditions() {
        let cfg = config(16, 20, 2);
        assert!(normality_check(&cfg, 0, &Sequential).is_err());
        assert!(normality_check(&cfg, 4, &Sequential).is_err());
        assert!(normality_check(&cfg, 3, &Sequential).is_ok());
    }
}
