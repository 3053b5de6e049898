//! FFT plans for real ±1 input of any length.
//!
//! Power-of-two sizes use an iterative radix-2 kernel. Other sizes use
//! Bluestein's chirp-z algorithm on a power-of-two convolution, so the
//! spectrum is exact (no zero padding of the signal itself). Even lengths are
//! packed into a half-length complex transform.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::SpectrumMagnitudes;
use crate::error::{Error, Result};

fn unit(angle: f64) -> Complex64 {
    let (s, c) = libm::sincos(angle);
    Complex64::new(c, s)
}

/// `exp(-2 pi i num / den)` with `num` reduced exactly first.
fn root(num: u128, den: u128) -> Complex64 {
    let r = num % den;
    unit(-2.0 * PI * (r as f64) / (den as f64))
}

#[derive(Debug, Clone)]
struct Radix2 {
    twiddles: Vec<Complex64>,
    reversed: Vec<u32>,
}

impl Radix2 {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let bits = n.trailing_zeros();
        let reversed = (0..n as u32)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (32 - bits)
                }
            })
            .collect();
        let twiddles = (0..n / 2).map(|k| root(k as u128, n as u128)).collect();
        Self { twiddles, reversed }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        let n = buf.len();
        for (i, &r) in self.reversed.iter().enumerate() {
            let r = r as usize;
            if i < r {
                buf.swap(i, r);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for block in buf.chunks_exact_mut(len) {
                let (lo, hi) = block.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let t = *b * self.twiddles[k * stride];
                    *b = *a - t;
                    *a += t;
                }
            }
            len <<= 1;
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    chirp: Vec<Complex64>,
    kernel: Vec<Complex64>,
    inner: Radix2,
}

impl Bluestein {
    fn new(n: usize) -> Self {
        let size = (2 * n - 1).next_power_of_two();
        let inner = Radix2::new(size);
        // exp(-i pi k^2 / n) = root(k^2, 2n)
        let chirp: Vec<Complex64> = (0..n)
            .map(|k| root((k as u128) * (k as u128), 2 * n as u128))
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); size];
        kernel[0] = chirp[0].conj();
        for k in 1..n {
            kernel[k] = chirp[k].conj();
            kernel[size - k] = chirp[k].conj();
        }
        inner.forward(&mut kernel);
        Self {
            chirp,
            kernel,
            inner,
        }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        let n = buf.len();
        let size = self.kernel.len();
        let mut work = vec![Complex64::new(0.0, 0.0); size];
        for k in 0..n {
            work[k] = buf[k] * self.chirp[k];
        }
        self.inner.forward(&mut work);
        for (w, h) in work.iter_mut().zip(&self.kernel) {
            *w = (*w * h).conj();
        }
        // inverse transform as conj(forward(conj(x))) / size
        self.inner.forward(&mut work);
        let scale = 1.0 / size as f64;
        for k in 0..n {
            buf[k] = work[k].conj() * scale * self.chirp[k];
        }
    }
}

#[derive(Debug, Clone)]
enum ComplexKernel {
    Trivial,
    Radix2(Radix2),
    Bluestein(Bluestein),
}

impl ComplexKernel {
    fn new(n: usize) -> Self {
        if n == 1 {
            ComplexKernel::Trivial
        } else if n.is_power_of_two() {
            ComplexKernel::Radix2(Radix2::new(n))
        } else {
            ComplexKernel::Bluestein(Bluestein::new(n))
        }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        match self {
            ComplexKernel::Trivial => {}
            ComplexKernel::Radix2(r) => r.forward(buf),
            ComplexKernel::Bluestein(b) => b.forward(buf),
        }
    }
}

/// A reusable transform for ±1 sequences of one fixed length.
///
/// Plans are immutable and can be shared between threads; each call allocates
/// its own scratch buffer.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    kernel: ComplexKernel,
    /// `exp(-2 pi i k / n)` for `k = 0..=n/2`; empty for odd `n`.
    post: Vec<Complex64>,
}

impl FftPlan {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::SequenceTooShort(n));
        }
        if n.is_multiple_of(2) {
            let half = n / 2;
            let post = (0..=half).map(|k| root(k as u128, n as u128)).collect();
            Ok(Self {
                n,
                kernel: ComplexKernel::new(half),
                post,
            })
        } else {
            Ok(Self {
                n,
                kernel: ComplexKernel::new(n),
                post: Vec::new(),
            })
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Complex spectrum bins `0..=n/2` of a real input.
    fn half_spectrum(&self, signed: &[i8]) -> Vec<Complex64> {
        let n = self.n;
        if n % 2 == 1 {
            let mut buf: Vec<Complex64> = signed
                .iter()
                .map(|&x| Complex64::new(f64::from(x), 0.0))
                .collect();
            self.kernel.forward(&mut buf);
            buf.truncate(n / 2 + 1);
            return buf;
        }
        let half = n / 2;
        let mut z: Vec<Complex64> = signed
            .chunks_exact(2)
            .map(|p| Complex64::new(f64::from(p[0]), f64::from(p[1])))
            .collect();
        self.kernel.forward(&mut z);
        (0..=half)
            .map(|k| {
                let a = z[k % half];
                let b = z[(half - k % half) % half].conj();
                let even = (a + b) * 0.5;
                // (a - b) / 2i
                let d = (a - b) * 0.5;
                let odd = Complex64::new(d.im, -d.re);
                even + self.post[k] * odd
            })
            .collect()
    }

    /// Magnitudes `|f_0| .. |f_{n/2}|` of a ±1 sequence of this plan's length.
    pub fn magnitudes(&self, signed: &[i8]) -> Result<SpectrumMagnitudes> {
        if signed.len() != self.n {
            return Err(Error::Config(alloc::format!(
                "plan built for {} samples, got {}",
                self.n,
                signed.len()
            )));
        }
        let mut mags: Vec<f64> = self
            .half_spectrum(signed)
            .iter()
            .map(|c| libm::sqrt(c.norm_sqr()))
            .collect();
        let edge = mags.pop().unwrap_or(0.0);
        Ok(SpectrumMagnitudes::from_parts(self.n, mags, edge))
    }
}
