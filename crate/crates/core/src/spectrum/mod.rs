//! Fourier magnitude spectra of ±1 sequences.
//!
//! `|f_j| = |sum_k x_k exp(-2 pi i k j / n)|`. Only `j = 0 ..= floor(n/2)` is
//! kept since `|f_{n-j}| = |f_j|` for real input.

mod fft;

use alloc::vec::Vec;
use core::f64::consts::PI;

pub use fft::FftPlan;

use crate::error::{Error, Result};
use crate::stats::CompensatedSum;

/// Half-spectrum magnitudes of an `n`-sample ±1 sequence.
///
/// `half` holds `|f_0| .. |f_{floor(n/2)-1}|`, the lines the test counts.
/// `edge` is `|f_{floor(n/2)}|`: the Nyquist line for even `n`, and for odd
/// `n` the last line that is not its own mirror image.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMagnitudes {
    n: usize,
    half: Vec<f64>,
    edge: f64,
}

impl SpectrumMagnitudes {
    pub(crate) fn from_parts(n: usize, half: Vec<f64>, edge: f64) -> Self {
        debug_assert_eq!(half.len(), n / 2);
        Self { n, half, edge }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half(&self) -> &[f64] {
        &self.half
    }

    pub fn dc(&self) -> f64 {
        self.half[0]
    }

    pub fn edge(&self) -> f64 {
        self.edge
    }

    pub fn nyquist(&self) -> Option<f64> {
        self.n.is_multiple_of(2).then_some(self.edge)
    }

    /// `|f_j|` for any `j` in `0..n`, using the mirror symmetry.
    pub fn magnitude(&self, j: usize) -> f64 {
        assert!(j < self.n, "bin {j} out of range for n = {}", self.n);
        let j = j.min(self.n - j);
        if j < self.half.len() {
            self.half[j]
        } else {
            self.edge
        }
    }

    /// `sum_{j<n} |f_j|^2`, rebuilt from the half spectrum. Equals `n^2` for
    /// ±1 input.
    pub fn parseval_energy(&self) -> f64 {
        let mut s = CompensatedSum::default();
        s.add(self.half[0] * self.half[0]);
        for &m in &self.half[1..] {
            s.add(2.0 * m * m);
        }
        let edge = self.edge * self.edge;
        s.add(if self.n.is_multiple_of(2) {
            edge
        } else {
            2.0 * edge
        });
        s.value()
    }

    /// `sum_{j < floor(n/2)} |f_j|^2`.
    pub fn half_energy(&self) -> f64 {
        self.half
            .iter()
            .map(|m| m * m)
            .collect::<CompensatedSum>()
            .value()
    }

    /// Right-hand side of the half-energy identity for ±1 input:
    /// `n^2/2 + |f_0|^2/2 - |f_{n/2}|^2/2` for even `n`, and
    /// `n^2/2 + |f_0|^2/2 - |f_{(n-1)/2}|^2` for odd `n`.
    pub fn half_energy_identity(&self) -> f64 {
        let n = self.n as f64;
        let dc = self.dc() * self.dc();
        let edge = self.edge * self.edge;
        if self.n.is_multiple_of(2) {
            n * n / 2.0 + dc / 2.0 - edge / 2.0
        } else {
            n * n / 2.0 + dc / 2.0 - edge
        }
    }
}

/// `cos` and `sin` of `2 pi r / n` for `r = 0..n`.
fn trig_table(n: usize) -> (Vec<f64>, Vec<f64>) {
    (0..n)
        .map(|r| {
            let (s, c) = libm::sincos(2.0 * PI * r as f64 / n as f64);
            (c, s)
        })
        .unzip()
}

fn direct_bin(signed: &[i8], j: usize, cos: &[f64], sin: &[f64]) -> f64 {
    let n = signed.len();
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    let step = j % n;
    let mut idx = 0usize;
    for &x in signed {
        let x = f64::from(x);
        re.add(x * cos[idx]);
        im.add(x * sin[idx]);
        idx += step;
        if idx >= n {
            idx -= n;
        }
    }
    libm::hypot(re.value(), im.value())
}

fn check_len(signed: &[i8]) -> Result<()> {
    if signed.len() < 2 {
        Err(Error::SequenceTooShort(signed.len()))
    } else {
        Ok(())
    }
}

/// Direct `O(n^2)` evaluation with compensated sums; the reference path.
pub fn dft_naive(signed: &[i8]) -> Result<SpectrumMagnitudes> {
    check_len(signed)?;
    let n = signed.len();
    let (cos, sin) = trig_table(n);
    let mut mags: Vec<f64> = (0..=n / 2)
        .map(|j| direct_bin(signed, j, &cos, &sin))
        .collect();
    let edge = mags.pop().unwrap_or(0.0);
    Ok(SpectrumMagnitudes::from_parts(n, mags, edge))
}

/// `|f_j|` for a single `j` in `0..n` by direct summation.
pub fn dft_naive_bin(signed: &[i8], j: usize) -> Result<f64> {
    check_len(signed)?;
    let (cos, sin) = trig_table(signed.len());
    Ok(direct_bin(signed, j, &cos, &sin))
}

/// `O(n log n)` evaluation for any length. Build an [`FftPlan`] directly when
/// transforming many sequences of the same length.
pub fn dft_fast(signed: &[i8]) -> Result<SpectrumMagnitudes> {
    FftPlan::new(signed.len())?.magnitudes(signed)
}
