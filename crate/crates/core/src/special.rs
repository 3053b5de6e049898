//! Special functions used by the test statistics.

use core::f64::consts::FRAC_1_SQRT_2;

/// Complementary error function (FreeBSD msun algorithm via `libm`).
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// `(1 - x)^k` evaluated as `exp(k * ln(1 - x))`; stays accurate for `k` in
/// the millions where repeated multiplication drifts.
pub fn pow1m(x: f64, k: f64) -> f64 {
    if k == 0.0 {
        return 1.0;
    }
    libm::exp(k * libm::log1p(-x))
}
