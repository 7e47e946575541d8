use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar; always stored in lowest terms with a positive denominator.
pub type ExactScalar = BigRational;

/// Commutative ring operations needed by the generic dense matrix code.
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

pub fn exact(numer: i64, denom: i64) -> ExactScalar {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn exact_int(value: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or a plain integer `"p"` into an exact rational.
pub fn parse_exact(text: &str) -> Result<ExactScalar> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("expected an exact value of the form p/q, got {text:?}"));
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

/// `"p/q"`, or `"p"` when the value is an integer.
pub fn format_exact(value: &ExactScalar) -> String {
    value.to_string()
}

pub fn to_f64(value: &ExactScalar) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn bigint_to_f64(value: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}
