//! Minkowski sums and exact mixed volumes.
//!
//! Mixed volumes are normalized so that `V(P, ..., P) = volume(P)`. They
//! are computed by the inclusion-exclusion polarization formula
//!
//! `n! V(P_1, ..., P_n) = sum over nonempty S of (-1)^{n-|S|} vol(sum_{i in S} P_i)`
//!
//! with repeated bodies collapsed so only distinct subset multisets are
//! hulled, and partial Minkowski sums re-hulled at each step to keep
//! candidate point counts small.

use crate::error::{Error, Result};
use crate::polytope::{hull, LatticePolytope};
use crate::rational::{factorial, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
#[cfg(test)]
use crate::vector::QVec;

/// Exact Minkowski sum of two polytopes (empty absorbs).
pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            got: q.ambient_dim(),
        });
    }
    if p.is_empty() || q.is_empty() {
        return Ok(LatticePolytope::empty(p.ambient_dim()));
    }
    let mut candidates = Vec::with_capacity(p.vertices().len() * q.vertices().len());
    for a in p.vertices() {
        for b in q.vertices() {
            candidates.push(a + b);
        }
    }
    hull(&candidates)
}

/// Exact mixed volume of `n` bodies in ambient dimension `n`.
/// Lower-dimensional bodies are allowed.
pub fn mixed_volume(bodies: &[&LatticePolytope]) -> Result<Rational> {
    let n = bodies.len();
    if n == 0 {
        return Err(Error::InvalidInput("no bodies".into()));
    }
    for b in bodies {
        if b.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.ambient_dim(),
            });
        }
        if b.is_empty() {
            return Err(Error::EmptyPolytope);
        }
    }
    // Group identical bodies (by vertex list) so subset sums are computed
    // per multiset of multiplicities rather than per subset.
    let mut groups: Vec<(&LatticePolytope, usize)> = Vec::new();
    'outer: for b in bodies {
        for g in groups.iter_mut() {
            if g.0.vertices() == b.vertices() {
                g.1 += 1;
                continue 'outer;
            }
        }
        groups.push((b, 1));
    }
    let mults: Vec<usize> = groups.iter().map(|g| g.1).collect();

    // Iterate over count vectors 0 <= c_i <= m_i, skipping the zero vector.
    // The polarization coefficient of a count vector c is
    // (-1)^(n - |c|) * prod_i C(m_i, c_i), and the summand is vol(sum_i c_i P_i).
    let mut acc = Rational::zero();
    let mut counts = vec![0usize; groups.len()];
    loop {
        // advance odometer
        let mut i = 0;
        loop {
            if i == groups.len() {
                // wrapped: done
                return Ok(acc / factorial(n));
            }
            counts[i] += 1;
            if counts[i] <= mults[i] {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        let total: usize = counts.iter().sum();
        let vol = scaled_sum_volume(&groups, &counts)?;
        if vol.is_zero() {
            continue;
        }
        let mut coeff = BigInt::from(1);
        for (g, &c) in mults.iter().zip(&counts) {
            coeff *= crate::rational::binomial(*g, c);
        }
        let sign = if (n - total) % 2 == 0 { 1 } else { -1 };
        acc += Rational::from_integer(coeff * BigInt::from(sign)) * vol;
    }
}

/// Volume of `sum_i counts_i * P_i` (Minkowski multiples), hulling after
/// each addition to keep intermediate vertex sets minimal.
fn scaled_sum_volume(groups: &[(&LatticePolytope, usize)], counts: &[usize]) -> Result<Rational> {
    let mut current: Option<LatticePolytope> = None;
    for ((p, _), &c) in groups.iter().zip(counts) {
        if c == 0 {
            continue;
        }
        let scaled = p.scaled(&Rational::from_integer(BigInt::from(c as i64)));
        current = Some(match current {
            None => scaled,
            Some(acc) => minkowski_sum(&acc, &scaled)?,
        });
    }
    Ok(current.map(|p| p.volume()).unwrap_or_else(Rational::zero))
}

/// Mixed volume `V(A, B, ..., B)` (one copy of `A`, n-1 copies of `B`)
/// computed along an independent algebraic route: the volume of `A + t B`
/// is a polynomial of degree n in t whose t^(n-1) coefficient equals
/// `n * V(A, B, ..., B)`. Used as a cross-check oracle in tests.
pub fn mixed_volume_two_body(a: &LatticePolytope, b: &LatticePolytope) -> Result<Rational> {
    let n = a.ambient_dim();
    if b.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.ambient_dim(),
        });
    }
    // Sample vol(A + tB) at t = 0..n and interpolate exactly.
    let mut values = Vec::with_capacity(n + 1);
    for t in 0..=n {
        let bt = b.scaled(&Rational::from_integer(BigInt::from(t as i64)));
        let sum = if t == 0 {
            a.clone()
        } else {
            minkowski_sum(a, &bt)?
        };
        values.push(sum.volume());
    }
    // Exact Lagrange interpolation through t = 0..n; coefficient of t^(n-1).
    let coeff = interpolation_coefficient(&values, n - 1);
    Ok(coeff / Rational::from_integer(BigInt::from(n as i64)))
}

/// Coefficient of `t^k` of the unique degree-<=d polynomial through
/// `(i, values[i])` for `i = 0..=d`.
pub fn interpolation_coefficient(values: &[Rational], k: usize) -> Rational {
    let pts: Vec<(Rational, Rational)> = values
        .iter()
        .enumerate()
        .map(|(i, v)| (Rational::from_integer(BigInt::from(i as i64)), v.clone()))
        .collect();
    let poly = crate::piecewise::Poly::interpolate(&pts);
    poly.coefficient(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn pts(coords: &[&[i64]]) -> Vec<QVec> {
        coords.iter().map(|c| QVec::from_ints(c)).collect()
    }

    fn unit_square() -> LatticePolytope {
        hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap()
    }

    fn unit_simplex() -> LatticePolytope {
        hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap()
    }

    #[test]
    fn minkowski_square_plus_point_translates() {
        let sq = unit_square();
        let pt = hull(&pts(&[&[3, 5]])).unwrap();
        let sum = minkowski_sum(&sq, &pt).unwrap();
        assert_eq!(sum.volume(), rat_int(1));
        assert!(sum.contains(&QVec::from_ints(&[3, 5])));
        assert!(sum.contains(&QVec::from_ints(&[4, 6])));
    }

    #[test]
    fn minkowski_square_plus_simplex_is_pentagon() {
        let sum = minkowski_sum(&unit_square(), &unit_simplex()).unwrap();
        assert_eq!(sum.vertices().len(), 5);
        assert_eq!(sum.volume(), rat(7, 2));
    }

    #[test]
    fn minkowski_identity_with_origin() {
        let origin = hull(&pts(&[&[0, 0]])).unwrap();
        let sum = minkowski_sum(&unit_square(), &origin).unwrap();
        assert_eq!(sum.vertices(), unit_square().vertices());
    }

    #[test]
    fn mixed_volume_diagonal_is_volume() {
        let sq = unit_square();
        assert_eq!(mixed_volume(&[&sq, &sq]).unwrap(), rat_int(1));
        let s = unit_simplex();
        assert_eq!(mixed_volume(&[&s, &s]).unwrap(), rat(1, 2));
    }

    #[test]
    fn mixed_volume_square_simplex() {
        let v = mixed_volume(&[&unit_square(), &unit_simplex()]).unwrap();
        assert_eq!(v, rat_int(1));
    }

    #[test]
    fn mixed_volume_of_orthogonal_segments() {
        let sx = hull(&pts(&[&[0, 0], &[1, 0]])).unwrap();
        let sy = hull(&pts(&[&[0, 0], &[0, 1]])).unwrap();
        assert_eq!(mixed_volume(&[&sx, &sy]).unwrap(), rat(1, 2));
        // Parallel segments span nothing.
        assert_eq!(mixed_volume(&[&sx, &sx]).unwrap(), rat_int(0));
    }

    #[test]
    fn two_body_route_agrees_with_polarization() {
        let sq = unit_square();
        let s = unit_simplex();
        assert_eq!(
            mixed_volume_two_body(&sq, &s).unwrap(),
            mixed_volume(&[&sq, &s]).unwrap()
        );
        let cube = hull(&pts(&[
            &[0, 0, 0],
            &[2, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[2, 1, 0],
            &[2, 0, 1],
            &[0, 1, 1],
            &[2, 1, 1],
        ]))
        .unwrap();
        let simplex3 = hull(&pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(
            mixed_volume_two_body(&cube, &simplex3).unwrap(),
            mixed_volume(&[&cube, &simplex3, &simplex3]).unwrap()
        );
    }

    #[test]
    fn mixed_volume_symmetry_and_multilinearity() {
        let a = unit_square();
        let b = unit_simplex();
        let c = hull(&pts(&[&[0, 0], &[2, 1], &[1, 2]])).unwrap();
        assert_eq!(
            mixed_volume(&[&a, &b]).unwrap(),
            mixed_volume(&[&b, &a]).unwrap()
        );
        // V(A + C, B) = V(A, B) + V(C, B)
        let ac = minkowski_sum(&a, &c).unwrap();
        assert_eq!(
            mixed_volume(&[&ac, &b]).unwrap(),
            mixed_volume(&[&a, &b]).unwrap() + mixed_volume(&[&c, &b]).unwrap()
        );
    }
}
