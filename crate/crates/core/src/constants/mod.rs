//! High-precision Euler-product mean-value constants.
//!
//! `𝔖_θ = Π_p (1 + θ_p/p)` is evaluated either as a plain truncated product
//! or by summing `log(1 + θ_p/p)` directly for small primes and expanding it
//! in powers of `1/p` for the rest, where each power sum over primes is a
//! prime zeta value.

mod singular;
mod zeta;

use std::fmt;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use singular::{
    phi_minus1_main_coefficient, schwarzian_main_coefficient, sigma_k_phi, sigma_k_phi_terms,
    singular_series_accelerated, singular_series_truncated, EXACT_PRODUCT_LIMIT,
};
pub use zeta::{prime_zeta, zeta_real};

/// Working precision and truncation parameters for constant evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub decimal_digits: u32,
    /// Primes up to this bound are multiplied in directly.
    pub direct_prime_limit: u64,
    /// Highest power of `1/p` kept in the tail expansion.
    pub tail_series_order: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { decimal_digits: 50, direct_prime_limit: 100, tail_series_order: 60 }
    }
}

impl PrecisionContext {
    pub fn with_digits(decimal_digits: u32) -> Self {
        PrecisionContext { decimal_digits, ..Default::default() }
    }

    /// Binary working precision: the requested digits plus 32 guard bits.
    pub fn bits(&self) -> u32 {
        (f64::from(self.decimal_digits) * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }

    pub fn validate(&self) -> Result<()> {
        if self.decimal_digits == 0 || self.decimal_digits > 10_000 {
            return Err(Error::Precision(format!("unsupported digit count {}", self.decimal_digits)));
        }
        if self.direct_prime_limit < 2 {
            return Err(Error::Precision("direct prime limit must be at least 2".into()));
        }
        if self.tail_series_order < 2 {
            return Err(Error::Precision("tail series order must be at least 2".into()));
        }
        Ok(())
    }

    /// `10^{-digits}`, the rounding allowance folded into every error bound.
    pub(crate) fn rounding_allowance(&self) -> f64 {
        10f64.powi(-(self.decimal_digits.min(300) as i32))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Truncated,
    Accelerated,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Truncated => "truncated",
            Method::Accelerated => "accelerated",
        })
    }
}

/// A constant with its error bound and provenance.
///
/// `exact` is set whenever the value is known as a rational, e.g. for the
/// zero exponent vector or small truncated products.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantValue {
    pub value: Float,
    pub error_bound: f64,
    pub method: Method,
    pub inputs: String,
    pub exact: Option<Rational>,
    /// Directly multiplied primes plus tail-series terms.
    pub factor_count: usize,
}

impl ConstantValue {
    pub(crate) fn exact(value: Rational, prec: u32, method: Method, inputs: String) -> Self {
        ConstantValue {
            value: Float::with_val(prec, &value),
            error_bound: 0.0,
            method,
            inputs,
            exact: Some(value),
            factor_count: 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_string(&self.value, digits)
    }
}

/// Significant-digit decimal rendering of a float (`"0"` for zero).
///
/// Positional notation is used for magnitudes between `1e-20` and `1e50`.
pub fn decimal_string(value: &Float, digits: usize) -> String {
    if value.is_zero() {
        return "0".into();
    }
    let sci = value.to_string_radix(10, Some(digits.max(1)));
    let Some((mantissa, exp)) = sci.split_once('e') else {
        return sci;
    };
    let Ok(exp) = exp.parse::<i32>() else {
        return sci;
    };
    if !(-20..0).contains(&exp) {
        return sci;
    }
    let (sign, body) = mantissa.strip_prefix('-').map_or(("", mantissa), |b| ("-", b));
    let mut out = format!("{sign}0.");
    out.extend(std::iter::repeat('0').take((-exp - 1) as usize));
    out.push_str(&body.replace('.', ""));
    out
}

/// Decimal rendering of a rational with `digits` significant digits.
pub fn rational_decimal(value: &Rational, digits: usize) -> String {
    let prec = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16;
    decimal_string(&Float::with_val(prec, value), digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        let f = |x: f64| Float::with_val(64, x);
        assert_eq!(decimal_string(&f(0.5), 3), "0.500");
        assert_eq!(decimal_string(&f(-0.03125), 4), "-0.03125");
        assert_eq!(decimal_string(&f(2.0), 3), "2.00");
        assert_eq!(decimal_string(&f(0.0), 3), "0");
        assert!(decimal_string(&f(1e-30), 3).contains('e'));
        assert_eq!(rational_decimal(&Rational::from((44, 15)), 5), "2.9333");
    }
}
