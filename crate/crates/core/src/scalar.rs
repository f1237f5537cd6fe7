//! Exact scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root of a non-negative rational, when it is a perfect square.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// The exact value of a finite binary64 number (zero for NaN/inf).
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(|| int(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_quarter() {
        assert_eq!(exact_sqrt(&ratio(1, 4)), Some(ratio(1, 2)));
        assert_eq!(exact_sqrt(&ratio(2, 1)), None);
        assert_eq!(exact_sqrt(&ratio(-1, 1)), None);
    }
}
