//! Exact rational helpers shared across the crate.
//!
//! Probabilities and marginals are `BigRational` throughout; floats appear
//! only inside logarithms and optimizer loops. The `num/den` string form
//! used here is the one the JSON file format and the CLI accept.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational '{0}': expected 'num/den' or 'num' with a nonzero denominator")]
pub struct ParseRatioError(pub String);

/// Parse an exact rational written as `num/den` (or a bare integer).
///
/// Decimal notation is rejected: `1/3` has no finite decimal form, so the
/// format never silently loses exactness.
pub fn parse_ratio(s: &str) -> Result<BigRational, ParseRatioError> {
    let s = s.trim();
    let mut parts = s.splitn(2, '/');
    let numer = parts.next().unwrap_or("");
    let numer = BigInt::from_str(numer.trim()).map_err(|_| ParseRatioError(s.to_string()))?;
    match parts.next() {
        None => Ok(BigRational::from_integer(numer)),
        Some(denom) => {
            let denom =
                BigInt::from_str(denom.trim()).map_err(|_| ParseRatioError(s.to_string()))?;
            if denom.is_zero() {
                return Err(ParseRatioError(s.to_string()));
            }
            Ok(BigRational::new(numer, denom))
        }
    }
}

/// Canonical `num/den` form (reduced, positive denominator).
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Shorthand used pervasively in tests.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// log2 of a positive big integer, exact for powers of two.
pub fn log2_bigint(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits in f64").log2();
    }
    let shift = bits - 53;
    let top: BigInt = x >> shift;
    top.to_f64().expect("53-bit value").log2() + shift as f64
}

/// log2 of a positive rational, computed as log2(num) - log2(den) so that
/// dyadic values come out exact.
pub fn log2_ratio(r: &BigRational) -> f64 {
    debug_assert!(r.is_positive());
    log2_bigint(r.numer()) - log2_bigint(r.denom())
}
