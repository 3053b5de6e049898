//! Descriptive statistics shared by the harnesses.

use alloc::vec::Vec;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<CompensatedSum>().value()
}

pub fn mean(xs: &[f64]) -> f64 {
    sum(xs) / xs.len() as f64
}

/// Unbiased sample variance (divides by `len - 1`).
pub fn sample_variance(xs: &[f64]) -> f64 {
    let mu = mean(xs);
    let ss: CompensatedSum = xs.iter().map(|x| (x - mu) * (x - mu)).collect();
    ss.value() / (xs.len() as f64 - 1.0)
}

/// Unbiased variance of integer counts, computed exactly in integer arithmetic
/// before the final division.
pub fn count_variance(counts: &[u32]) -> f64 {
    let len = counts.len() as u128;
    let s: u128 = counts.iter().map(|&c| u128::from(c)).sum();
    let ss: u128 = counts.iter().map(|&c| u128::from(c) * u128::from(c)).sum();
    // len * ss - s^2 = len^2 * population variance, exact
    let scaled = len * ss - s * s;
    scaled as f64 / (len as f64 * (len as f64 - 1.0))
}

/// Sample excess kurtosis `m4 / m2^2 - 3` with population moments.
pub fn excess_kurtosis(xs: &[f64]) -> f64 {
    let mu = mean(xs);
    let m2: CompensatedSum = xs.iter().map(|x| (x - mu) * (x - mu)).collect();
    let m4: CompensatedSum = xs
        .iter()
        .map(|x| {
            let d = (x - mu) * (x - mu);
            d * d
        })
        .collect();
    let len = xs.len() as f64;
    let m2 = m2.value() / len;
    (m4.value() / len) / (m2 * m2) - 3.0
}

/// Pearson correlation coefficient.
pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = CompensatedSum::default();
    let mut sxx = CompensatedSum::default();
    let mut syy = CompensatedSum::default();
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy.add(dx * dy);
        sxx.add(dx * dx);
        syy.add(dy * dy);
    }
    sxy.value() / libm::sqrt(sxx.value() * syy.value())
}

/// Two-sided Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted: Vec<f64> = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let len = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / len - f;
        let below = f - i as f64 / len;
        d = d.max(above).max(below);
    }
    d
}

/// Mean and standard error over independent batch estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub estimate: f64,
    pub stderr: f64,
}

impl BatchSummary {
    /// `estimate` is the mean of `per_batch`; `stderr` its sample SD over
    /// `sqrt(batches)`. Needs at least two batches.
    pub fn of(per_batch: &[f64]) -> Self {
        debug_assert!(per_batch.len() >= 2);
        let estimate = mean(per_batch);
        let stderr = libm::sqrt(sample_variance(per_batch) / per_batch.len() as f64);
        Self { estimate, stderr }
    }
}

/// Contiguous index range of batch `b` when `total` items are split into
/// `batches` near-equal parts.
pub fn batch_range(total: usize, batches: usize, b: usize) -> core::ops::Range<usize> {
    (b * total / batches)..((b + 1) * total / batches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(sum(&xs), 2.0);
    }

    #[test]
    fn variance_and_counts_agree() {
        let counts = [3u32, 7, 7, 1, 9, 4];
        let floats: Vec<f64> = counts.iter().map(|&c| f64::from(c)).collect();
        assert!((count_variance(&counts) - sample_variance(&floats)).abs() < 1e-12);
        assert_eq!(count_variance(&[5, 5, 5]), 0.0);
    }

    #[test]
    fn batch_summary() {
        let s = BatchSummary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.estimate, 2.5);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((s.stderr - sd / 2.0).abs() < 1e-15);
    }

    #[test]
    fn batch_ranges_cover_everything() {
        let total = 103;
        let mut next = 0;
        for b in 0..10 {
            let r = batch_range(total, 10, b);
            assert_eq!(r.start, next);
            next = r.end;
        }
        assert_eq!(next, total);
    }

    #[test]
    fn ks_of_uniform_grid() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.005).abs() < 1e-12);
    }

    #[test]
    fn correlation_extremes() {
        let xs = vec![1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| -2.0 * x + 1.0).collect();
        assert!((correlation(&xs, &ys) + 1.0).abs() < 1e-15);
    }
}
