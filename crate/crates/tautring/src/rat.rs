//! Exact rational scalars. Everything in this crate is exact; no floating
//! point appears anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Formats in lowest terms as `p/q`, omitting `/q` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(p))
        }
    }
}

/// (2k+1)!! as a big integer, with the convention (-1)!! = 1.
pub fn odd_double_factorial(k: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut m = 2 * k + 1;
    while m > 1 {
        acc *= m;
        m -= 2;
    }
    acc
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn is_positive_integer(r: &Rat) -> bool {
    is_integer(r) && r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorials() {
        assert_eq!(odd_double_factorial(-1), BigInt::from(1));
        assert_eq!(odd_double_factorial(0), BigInt::from(1));
        assert_eq!(odd_double_factorial(1), BigInt::from(3));
        assert_eq!(odd_double_factorial(4), BigInt::from(945));
    }

    #[test]
    fn format_parse_round_trip() {
        for r in [rat(1, 1152), rat(-11, 12), int(27), rat(6, -5)] {
            assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
        }
        assert_eq!(format_rat(&rat(6, -5)), "-6/5");
        assert!(parse_rat("3/0").is_none());
    }
}
