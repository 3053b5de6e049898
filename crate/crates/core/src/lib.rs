//! Core of the discrete Fourier transform (spectral) randomness test.
//!
//! Everything in this crate is pure computation and builds without `std`
//! (an allocator is required). The pieces are:
//!
//! * [`bitseq`]: binary input sequences and their ±1 view,
//! * [`rng`]: a bit-exact MT19937 generator plus per-task seed derivation,
//! * [`spectrum`]: half-spectrum magnitudes by direct summation and by FFT,
//! * [`dft_test`]: the counting statistic `N1`, the normalised deviation `d`
//!   and the p-value, under every published variance divisor,
//! * [`theory`]: closed forms for the indicator variance, correlation,
//!   `V[N1]` and the divisor `a(m)` under the uniform-simplex model,
//! * [`simplex`]: an exact sampler for that model,
//! * [`experiments`]: Monte Carlo and enumeration harnesses built on the above.
//!
//! Parallelism is injected through the [`exec::Executor`] trait so that the
//! harnesses stay deterministic for any worker count.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bitseq;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod rng;
pub mod simplex;
pub mod special;
pub mod spectrum;
pub mod stats;
pub mod theory;

pub use bitseq::BitSequence;
pub use dft_test::{run_test, TestOutcome, ThresholdRule, VarianceModel};
pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
pub use rng::{Mt19937, SeedPlan};
pub use spectrum::{dft_fast, dft_naive, FftPlan, SpectrumMagnitudes};
