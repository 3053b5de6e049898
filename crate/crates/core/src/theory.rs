//! Closed forms under the uniform-simplex model of the half spectrum.
//!
//! The model: `(|f_0|^2, ..., |f_{m-1}|^2)` with `m = n/2` is uniform on
//! `{x_j >= 0, sum x_j = 2m^2}`. With `F_j = 1{|f_j|^2 <= T^2}` and
//! `q = (1 - T^2/2m^2)^(m-1)` (the probability a line exceeds `T`):
//!
//! * `V[F] = q - q^2`
//! * `Cov[F_i, F_j] = (1 - T^2/m^2)^(m-1) - q^2`
//! * `V[N1] = m V[F] + m(m-1) Cov[F_i, F_j]`
//! * `a = 2 * 0.05 * 0.95 * m / V[N1]`
//!
//! Powers are evaluated through `log1p`/`expm1`. The covariance in particular
//! is formed as `q^2 * expm1((m-1) * log1p(-(x/(1-x))^2))` with
//! `x = T^2/2m^2`, which is algebraically the expression above but does not
//! cancel catastrophically when `m` is in the millions.

use alloc::format;

use crate::error::{Error, Result};
use crate::special::pow1m;

/// `m` at which [`limit_a`] evaluates the divisor.
pub const LIMIT_M: u64 = 1 << 24;

/// Model size and squared threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryParams {
    m: u64,
    t2: f64,
}

impl TheoryParams {
    pub fn new(m: u64, t2: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::Domain(format!("m must be at least 3, got {m}")));
        }
        if !(t2.is_finite() && t2 >= 0.0) {
            return Err(Error::Domain(format!(
                "T^2 must be finite and >= 0, got {t2}"
            )));
        }
        Ok(Self { m, t2 })
    }

    /// `T^2 = -2m ln 0.05`, the corrected threshold for `n = 2m` bits.
    pub fn log005(m: u64) -> Result<Self> {
        Self::new(m, -2.0 * m as f64 * libm::log(0.05))
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    /// Total energy `2m^2` of the simplex.
    pub fn energy(&self) -> f64 {
        let m = self.m as f64;
        2.0 * m * m
    }

    /// `t2 / 2m^2`.
    fn x(&self) -> f64 {
        self.t2 / self.energy()
    }

    fn require_pair_domain(&self) -> Result<()> {
        let m = self.m as f64;
        if self.t2 > m * m {
            return Err(Error::Domain(format!(
                "pair terms need T^2 <= m^2 (T^2 = {}, m = {})",
                self.t2, self.m
            )));
        }
        Ok(())
    }
}

/// Closed-form quantities at one `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoreticalQuantities {
    pub m: u64,
    pub v_f: f64,
    pub corr_ff: f64,
    pub cov_ff: f64,
    pub var_n1: f64,
    pub a: f64,
}

/// `P(|f_j|^2 > t) = (1 - t/2m^2)^(m-1)` on `[0, 2m^2]`.
pub fn survival(t: f64, m: u64) -> f64 {
    let e = 2.0 * (m as f64) * (m as f64);
    if t <= 0.0 {
        1.0
    } else if t >= e {
        0.0
    } else {
        pow1m(t / e, (m - 1) as f64)
    }
}

/// `P(|f_i|^2 > s, |f_j|^2 > t) = (1 - (s+t)/2m^2)^(m-1)` for `s, t >= 0`.
pub fn joint_survival(s: f64, t: f64, m: u64) -> f64 {
    survival(s.max(0.0) + t.max(0.0), m)
}

/// Density of one `|f_j|^2`: `(m-1)/(2m^2) (1 - u/2m^2)^(m-2)` on `[0, 2m^2]`.
pub fn marginal_pdf(u: f64, m: u64) -> f64 {
    debug_assert!(m >= 2);
    let mf = m as f64;
    let e = 2.0 * mf * mf;
    if !(0.0..=e).contains(&u) {
        return 0.0;
    }
    (mf - 1.0) / e * pow1m(u / e, (m - 2) as f64)
}

/// Joint density of a pair: `(m-1)(m-2)/(2m^2)^2 (1 - (u+v)/2m^2)^(m-3)` on
/// the triangle `u, v >= 0, u + v <= 2m^2`.
pub fn joint_pdf(u: f64, v: f64, m: u64) -> f64 {
    debug_assert!(m >= 3);
    let mf = m as f64;
    let e = 2.0 * mf * mf;
    if u < 0.0 || v < 0.0 || u + v > e {
        return 0.0;
    }
    (mf - 1.0) * (mf - 2.0) / (e * e) * pow1m((u + v) / e, (m - 3) as f64)
}

/// `V[F] = q - q^2`, `q = (1 - T^2/2m^2)^(m-1)`.
pub fn indicator_variance(params: &TheoryParams) -> Result<f64> {
    let x = params.x();
    if x > 1.0 {
        return Err(Error::Domain(format!(
            "T^2 = {} exceeds the total energy {}",
            params.t2,
            params.energy()
        )));
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    let log_q = (params.m - 1) as f64 * libm::log1p(-x);
    // q (1 - q) with 1 - q = -expm1(log q)
    Ok(libm::exp(log_q) * -libm::expm1(log_q))
}

/// `Cov[F_i, F_j] = (1 - T^2/m^2)^(m-1) - (1 - T^2/2m^2)^(2m-2)`.
pub fn indicator_covariance(params: &TheoryParams) -> Result<f64> {
    params.require_pair_domain()?;
    let x = params.x();
    let k = (params.m - 1) as f64;
    let q2 = libm::exp(2.0 * k * libm::log1p(-x));
    let r = x / (1.0 - x);
    Ok(q2 * libm::expm1(k * libm::log1p(-r * r)))
}

/// `C[F_i, F_j] = Cov[F_i, F_j] / V[F]`.
pub fn indicator_correlation(params: &TheoryParams) -> Result<f64> {
    let v = indicator_variance(params)?;
    if v == 0.0 {
        return Err(Error::Domain(
            "indicator variance is zero; correlation undefined".into(),
        ));
    }
    Ok(indicator_covariance(params)? / v)
}

/// `V[N1] = m V[F] + m(m-1) Cov[F_i, F_j]`.
pub fn var_n1(params: &TheoryParams) -> Result<f64> {
    let m = params.m as f64;
    Ok(m * indicator_variance(params)? + m * (m - 1.0) * indicator_covariance(params)?)
}

/// `a = 2 * 0.05 * 0.95 * m / V[N1]`, so that `V[N1] = 0.95 * 0.05 * n / a`.
pub fn divisor_a(params: &TheoryParams) -> Result<f64> {
    let v = var_n1(params)?;
    if v <= 0.0 {
        return Err(Error::Domain(format!("V[N1] = {v} is not positive")));
    }
    Ok(2.0 * 0.05 * 0.95 * params.m as f64 / v)
}

pub fn quantities(params: &TheoryParams) -> Result<TheoreticalQuantities> {
    let v_f = indicator_variance(params)?;
    let cov_ff = indicator_covariance(params)?;
    let m = params.m as f64;
    let var_n1 = m * v_f + m * (m - 1.0) * cov_ff;
    if v_f == 0.0 || var_n1 <= 0.0 {
        return Err(Error::Domain(format!(
            "degenerate quantities at m = {}: V[F] = {v_f}, V[N1] = {var_n1}",
            params.m
        )));
    }
    Ok(TheoreticalQuantities {
        m: params.m,
        v_f,
        corr_ff: cov_ff / v_f,
        cov_ff,
        var_n1,
        a: 2.0 * 0.05 * 0.95 * m / var_n1,
    })
}

/// The divisor at `m = 2^24`, used as the large-`m` constant (about 3.7903).
pub fn limit_a() -> f64 {
    TheoryParams::log005(LIMIT_M)
        .and_then(|p| divisor_a(&p))
        .expect("closed form is defined at LIMIT_M")
}
