//! Exact rational scalars and small arithmetic helpers.
//!
//! Every quantity the library computes is a `Rational` unless explicitly
//! documented as an approximation. `num_rational::BigRational` already
//! maintains the invariants we need (lowest terms, positive denominator),
//! so the kernel builds on it directly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"`, or `"-p/q"` into a rational in lowest terms.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.trim().parse().ok()?;
            let den: BigInt = q.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(num))
        }
    }
}

/// Renders a rational as `"p/q"` (or `"p"` when integral).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Floor of a rational as a big integer.
pub fn rational_floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Ceiling of a rational as a big integer.
pub fn rational_ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// n! as a rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// Binomial coefficient C(n, k) as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Least common multiple of the denominators of an iterator of rationals.
/// Returns 1 for an empty iterator.
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rational>>(iter: I) -> BigInt {
    let mut acc = BigInt::one();
    for r in iter {
        acc = num_integer::lcm(acc, r.denom().clone());
    }
    acc
}

/// |r| as a rational.
pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-5/7", "12", "-1", "0"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn floor_ceil_match_integer_division() {
        assert_eq!(rational_floor(&rat(7, 2)), BigInt::from(3));
        assert_eq!(rational_floor(&rat(-7, 2)), BigInt::from(-4));
        assert_eq!(rational_ceil(&rat(7, 2)), BigInt::from(4));
        assert_eq!(rational_ceil(&rat(-7, 2)), BigInt::from(-3));
    }

    #[test]
    fn denominator_lcm_covers_all_entries() {
        let xs = [rat(1, 6), rat(3, 4), rat(2, 1)];
        assert_eq!(denominator_lcm(xs.iter()), BigInt::from(12));
    }

    #[test]
    fn small_combinatorics() {
        assert_eq!(factorial(4), rat_int(24));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }
}
