//! Rational coordinate vectors for lattice and valuation data.

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A point of the character space or a valuation vector, with exact
/// rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVec {
    coords: Vec<Rational>,
}

impl QVec {
    pub fn new(coords: Vec<Rational>) -> Self {
        QVec { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVec {
            coords: coords
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        QVec {
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[axis] = Rational::from_integer(BigInt::from(1));
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn dot(&self, other: &QVec) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Rational::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc += a * b;
        }
        acc
    }

    pub fn scale(&self, s: &Rational) -> QVec {
        QVec {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Appends a coordinate, lifting the vector one dimension up.
    pub fn extended(&self, last: Rational) -> QVec {
        let mut coords = self.coords.clone();
        coords.push(last);
        QVec { coords }
    }

    /// Drops the last coordinate.
    pub fn truncated(&self) -> QVec {
        let mut coords = self.coords.clone();
        coords.pop();
        QVec { coords }
    }

    /// True if every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates, or an error when some entry is fractional.
    pub fn to_bigints(&self) -> Result<Vec<BigInt>> {
        self.coords
            .iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NotIntegral(format!("{self:?}")))
                }
            })
            .collect()
    }

    /// Scales an integer direction vector to its primitive representative
    /// (coordinates divided by their gcd, orientation preserved).
    /// A rational input is first cleared of denominators.
    pub fn primitive(&self) -> QVec {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = crate::rational::denominator_lcm(self.coords.iter());
        let ints: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = num_integer::gcd(g, v.abs());
        }
        QVec {
            coords: ints
                .into_iter()
                .map(|v| Rational::from_integer(v / g.clone()))
                .collect(),
        }
    }

    pub fn checked_same_dim(&self, other: &QVec) -> Result<()> {
        if self.dim() != other.dim() {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

impl Add for &QVec {
    type Output = QVec;
    fn add(self, rhs: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        QVec {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &QVec {
    type Output = QVec;
    fn sub(self, rhs: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        QVec {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &QVec {
    type Output = QVec;
    fn neg(self) -> QVec {
        QVec {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul<&Rational> for &QVec {
    type Output = QVec;
    fn mul(self, rhs: &Rational) -> QVec {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn primitive_reduces_to_coprime_integers() {
        let v = QVec::new(vec![rat(4, 6), rat(-2, 3)]);
        assert_eq!(v.primitive(), QVec::from_ints(&[1, -1]));
        let w = QVec::from_ints(&[6, -9, 3]);
        assert_eq!(w.primitive(), QVec::from_ints(&[2, -3, 1]));
        assert_eq!(QVec::zero(2).primitive(), QVec::zero(2));
    }

    #[test]
    fn dot_and_arithmetic() {
        let a = QVec::from_ints(&[1, 2]);
        let b = QVec::from_ints(&[3, -1]);
        assert_eq!(a.dot(&b), rat(1, 1));
        assert_eq!(&a + &b, QVec::from_ints(&[4, 1]));
        assert_eq!(&a - &b, QVec::from_ints(&[-2, 3]));
        assert_eq!((-&a), QVec::from_ints(&[-1, -2]));
    }
}
