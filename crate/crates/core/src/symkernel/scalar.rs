//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always stored in lowest terms with a positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn to_f64(s: &Scalar) -> f64 {
    match (s.numer().to_f64(), s.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => s.to_f64().unwrap_or(f64::NAN),
    }
}

/// `p/q`, or `p` when the denominator is one.
pub fn render(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `p`, `-p`, `p/q` or a plain decimal such as `0.25` into an exact rational.
pub fn parse(text: &str) -> Option<Scalar> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((whole, fracpart)) = text.split_once('.') {
        let neg = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !fracpart.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let digits = format!("{whole_digits}{fracpart}");
        let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
        let d = num_traits::pow(BigInt::from(10), fracpart.len());
        let v = BigRational::new(n, d);
        return Some(if neg { -v } else { v });
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

pub fn is_negative(s: &Scalar) -> bool {
    s.is_negative()
}

/// Integer exponent power; negative exponents invert.
pub fn powi(s: &Scalar, e: i64) -> Scalar {
    if e >= 0 {
        num_traits::pow(s.clone(), e as usize)
    } else {
        num_traits::pow(s.recip(), (-e) as usize)
    }
}
