//! Assembly of the order-`n` bound `(4n)!·E*·(C(E*)λ²/√E*)^n` and the stopping order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest stopping order checked with exact arithmetic.
pub const MAX_EXACT_ORDER: u64 = 5000;

/// Description of the `ln⁹` normalization used in `C(E*)`.
pub const LOG_NORMALIZATION: &str = "C(E*) = K ln^9(e + 1/E*)";

/// `ln(e + 1/E*)` computed without forming `1/E*`.
fn ln_log_argument(ln_estar: f64) -> f64 {
    // ln(e + 1/E*) = −ln E* + ln(1 + e·E*)
    -ln_estar + (std::f64::consts::E * ln_estar.exp()).ln_1p()
}

/// `C(E*) = K ln⁹(e + 1/E*)`.
pub fn c_of_estar(estar: f64, k: f64) -> f64 {
    k * ln_log_argument(estar.ln()).powi(9)
}

/// `ln(C(E*) λ²/√E*)` from logarithms of the inputs.
pub fn ln_ratio(ln_lambda: f64, ln_estar: f64, k: f64) -> f64 {
    k.ln() + 9.0 * ln_log_argument(ln_estar).ln() + 2.0 * ln_lambda - 0.5 * ln_estar
}

/// `ln m!` (exact summation below 64, Stirling series above).
pub fn ln_factorial(m: u64) -> f64 {
    if m < 64 {
        return (2..=m).map(|k| (k as f64).ln()).sum();
    }
    let x = m as f64;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
}

/// `N = ⌈r^{−1/4}/4⌉`, at least 1.
pub fn stopping_order(ratio: f64) -> u64 {
    ((ratio.powf(-0.25) / 4.0).ceil() as u64).max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundAssembly {
    pub n: u64,
    pub lambda: f64,
    pub estar: f64,
    pub k: f64,
    pub c_of_estar: f64,
    /// `C(E*) λ²/√E*`.
    pub ratio: f64,
    /// `ln[(4n)! E* r^n]`.
    pub ln_bound_value: f64,
    /// `(4n)! E* r^n`; may overflow to infinity.
    pub bound_value: f64,
    /// `E* r^n` without the combinatorial prefactor.
    pub bound_without_factorial: f64,
    pub chosen_n: u64,
    pub normalization: String,
}

pub fn assemble_an_bound(n: u64, lambda: f64, estar: f64, k: f64) -> Result<BoundAssembly> {
    if !(estar > 0.0 && estar < 1.0) {
        return Err(invalid(format!("estar must lie in (0, 1), got {estar}")));
    }
    if !(lambda > 0.0) || !lambda.is_finite() || !(k > 0.0) {
        return Err(invalid("lambda and K must be positive"));
    }
    if n == 0 {
        return Err(invalid("order must be at least 1"));
    }
    let c = c_of_estar(estar, k);
    let ratio = c * lambda * lambda / estar.sqrt();
    if ratio >= 1.0 {
        return Err(Error::OutsideLifshitzWindow { ratio });
    }
    let ln_bound_value = ln_factorial(4 * n) + estar.ln() + n as f64 * ratio.ln();
    Ok(BoundAssembly {
        n,
        lambda,
        estar,
        k,
        c_of_estar: c,
        ratio,
        ln_bound_value,
        bound_value: ln_bound_value.exp(),
        bound_without_factorial: estar * ratio.powf(n as f64),
        chosen_n: stopping_order(ratio),
        normalization: LOG_NORMALIZATION.into(),
    })
}

/// `(n, ln bound)` for `n = 1..=n_max` and the minimizing order.
pub fn bound_profile(lambda: f64, estar: f64, k: f64, n_max: u64) -> Result<(Vec<(u64, f64)>, u64)> {
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        out.push((n, assemble_an_bound(n, lambda, estar, k)?.ln_bound_value));
    }
    let best = out
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|x| x.0)
        .ok_or_else(|| invalid("empty profile"))?;
    Ok((out, best))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoppingCheck {
    pub ratio: f64,
    pub n: u64,
    /// Exact verdict for `(4N)!·r^N·e^N < 1`.
    pub holds: bool,
    /// `ln[(4N)!·r^N] + N`, in floating point for reporting.
    pub ln_margin: f64,
}

/// Rational upper bound on `e`.
fn e_upper() -> BigRational {
    BigRational::new(
        BigInt::from(27_182_818_284_590_453u64),
        BigInt::from(10_000_000_000_000_000u64),
    )
}

/// Exact check of `(4N)!·r^N < e^{−N}` at `N = stopping_order(r)`.
///
/// `r` is taken as the exact binary value of the `f64`; `e` is replaced by a
/// rational upper bound, so a `true` verdict is rigorous.
pub fn stopping_inequality_exact(ratio: f64) -> Result<StoppingCheck> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::OutsideLifshitzWindow { ratio });
    }
    let n = stopping_order(ratio);
    if n > MAX_EXACT_ORDER {
        return Err(Error::TooLarge {
            what: "stopping order for exact check",
            size: n as usize,
            limit: MAX_EXACT_ORDER as usize,
        });
    }
    let r = BigRational::from_float(ratio).ok_or_else(|| invalid("ratio not representable"))?;
    let mut fact = BigInt::one();
    for m in 2..=4 * n {
        fact *= BigInt::from(m);
    }
    let base = r * e_upper();
    let lhs = BigRational::from_integer(fact) * num_traits::pow(base, n as usize);
    let holds = lhs < BigRational::one();
    let ln_margin = ln_factorial(4 * n) + n as f64 * (ratio.ln() + 1.0);
    Ok(StoppingCheck {
        ratio,
        n,
        holds,
        ln_margin,
    })
}

/// Smallest `B` with `C(E*)λ²/√E* ≤ λ^{Bε}` at `E* = λ^{4−ε}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioExponent {
    pub lambda: f64,
    pub epsilon: f64,
    pub k: f64,
    pub ln_estar: f64,
    pub ln_ratio: f64,
    pub b: f64,
    pub in_unit_interval: bool,
}

pub fn ratio_exponent(lambda: f64, epsilon: f64, k: f64) -> Result<RatioExponent> {
    if !(lambda > 0.0 && lambda < 1.0) || !(epsilon > 0.0 && epsilon < 4.0) {
        return Err(invalid("need 0 < lambda < 1 and 0 < epsilon < 4"));
    }
    let ln_lambda = lambda.ln();
    let ln_estar = (4.0 - epsilon) * ln_lambda;
    let lr = ln_ratio(ln_lambda, ln_estar, k);
    let b = lr / (epsilon * ln_lambda);
    Ok(RatioExponent {
        lambda,
        epsilon,
        k,
        ln_estar,
        ln_ratio: lr,
        b,
        in_unit_interval: b > 0.0 && b < 1.0,
    })
}
