//! Complete rational fans, normal fans of polytopes, and piecewise-linear
//! support-function data on them.

use crate::error::{Error, Result};
use crate::linalg::{solve_any, QMatrix};
use crate::polytope::LatticePolytope;
use crate::rational::Rational;
use crate::vector::QVec;
use num_traits::Zero;

/// A complete fan given by its rays (primitive integer vectors) and its
/// maximal cones (sets of ray indices). In this crate fans always arise as
/// normal fans of full-dimensional polytopes, so completeness and the face
/// property hold by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<QVec>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[QVec] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn ray_index(&self, v: &QVec) -> Option<usize> {
        let prim = v.primitive();
        self.rays.iter().position(|r| *r == prim)
    }

    /// The normal fan of a full-dimensional polytope: one ray per facet
    /// (the inward facet normal) and one maximal cone per vertex, spanned
    /// by the normals of the facets through that vertex.
    pub fn normal_fan(p: &LatticePolytope) -> Result<Fan> {
        if !p.is_full_dim() {
            return Err(Error::Degenerate(
                "normal fan requires a full-dimensional polytope".into(),
            ));
        }
        let dim = p.ambient_dim();
        let rays: Vec<QVec> = p.facets().iter().map(|h| h.normal.clone()).collect();
        let mut max_cones = Vec::new();
        for v in p.vertices() {
            let cone: Vec<usize> = (0..rays.len())
                .filter(|&i| p.facets()[i].is_tight(v))
                .collect();
            max_cones.push(cone);
        }
        Ok(Fan {
            dim,
            rays,
            max_cones,
        })
    }

    /// Index of a maximal cone containing `v` (complete fans always have
    /// one). Returns the first match in cone order.
    pub fn locate(&self, v: &QVec) -> Result<usize> {
        for (i, cone) in self.max_cones.iter().enumerate() {
            if self.cone_contains(cone, v) {
                return Ok(i);
            }
        }
        Err(Error::OutsideFan)
    }

    /// Exact membership of `v` in the cone spanned by the given rays.
    pub fn cone_contains(&self, cone: &[usize], v: &QVec) -> bool {
        if v.is_zero() {
            return true;
        }
        nonneg_combination(&self.gens(cone), v).is_some()
    }

    fn gens(&self, cone: &[usize]) -> Vec<QVec> {
        cone.iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// A nonnegative combination of the cone's rays representing `v`,
    /// as (global ray index, coefficient) pairs.
    pub fn cone_coordinates(&self, cone: &[usize], v: &QVec) -> Option<Vec<(usize, Rational)>> {
        nonneg_combination(&self.gens(cone), v).map(|combo| {
            combo
                .into_iter()
                .map(|(local, lam)| (cone[local], lam))
                .collect()
        })
    }

    /// The linear functional on the cone that takes value `values[i]` at
    /// ray `cone[i]`, i.e. the Cartier data of a divisor on this cone.
    /// `None` when no linear extension exists.
    pub fn cone_linear_data(&self, cone: &[usize], values: &[Rational]) -> Option<QVec> {
        let mut mat = QMatrix::zero(cone.len(), self.dim);
        for (r, &i) in cone.iter().enumerate() {
            for c in 0..self.dim {
                mat[(r, c)] = self.rays[i].coord(c).clone();
            }
        }
        let m = solve_any(&mat, values)?;
        let mv = QVec::new(m);
        // Verify: solve_any only guarantees consistency of the system it saw.
        for (r, &i) in cone.iter().enumerate() {
            if mv.dot(&self.rays[i]) != values[r] {
                return None;
            }
        }
        Some(mv)
    }
}

/// Finds lambda >= 0 with `sum lambda_i g_i = v`, supported on a linearly
/// independent subset (Caratheodory). Returns (index, coefficient) pairs
/// for the nonzero coefficients.
fn nonneg_combination(gens: &[QVec], v: &QVec) -> Option<Vec<(usize, Rational)>> {
    let n = v.dim();
    let k = gens.len();
    let max_size = n.min(k);
    let mut subset: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        size: usize,
        gens: &[QVec],
        v: &QVec,
        subset: &mut Vec<usize>,
        n: usize,
    ) -> Option<Vec<(usize, Rational)>> {
        if subset.len() == size {
            let mut mat = QMatrix::zero(n, size);
            for (c, &gi) in subset.iter().enumerate() {
                for r in 0..n {
                    mat[(r, c)] = gens[gi].coord(r).clone();
                }
            }
            let rhs: Vec<Rational> = v.coords().to_vec();
            let sol = solve_any(&mat, &rhs)?;
            // Check the solution reproduces v and is nonnegative.
            let mut recon = QVec::zero(n);
            for (c, &gi) in subset.iter().enumerate() {
                if sol[c] < Rational::zero() {
                    return None;
                }
                recon = &recon + &gens[gi].scale(&sol[c]);
            }
            if &recon == v {
                return Some(
                    subset
                        .iter()
                        .zip(sol)
                        .filter(|(_, s)| !s.is_zero())
                        .map(|(&i, s)| (i, s))
                        .collect(),
                );
            }
            return None;
        }
        for i in start..gens.len() {
            subset.push(i);
            if let Some(hit) = rec(i + 1, size, gens, v, subset, n) {
                subset.pop();
                return Some(hit);
            }
            subset.pop();
        }
        None
    }
    for size in 1..=max_size {
        if let Some(hit) = rec(0, size, gens, v, &mut subset, n) {
            return Some(hit);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::hull;
    use crate::rational::{rat, rat_int};

    fn simplex2() -> LatticePolytope {
        hull(&[
            QVec::from_ints(&[0, 0]),
            QVec::from_ints(&[1, 0]),
            QVec::from_ints(&[0, 1]),
        ])
        .unwrap()
    }

    #[test]
    fn normal_fan_of_unit_simplex() {
        let fan = Fan::normal_fan(&simplex2()).unwrap();
        assert_eq!(fan.rays().len(), 3);
        assert!(fan.ray_index(&QVec::from_ints(&[1, 0])).is_some());
        assert!(fan.ray_index(&QVec::from_ints(&[0, 1])).is_some());
        assert!(fan.ray_index(&QVec::from_ints(&[-1, -1])).is_some());
        assert_eq!(fan.max_cones().len(), 3);
        for cone in fan.max_cones() {
            assert_eq!(cone.len(), 2);
        }
    }

    #[test]
    fn locate_finds_containing_cone() {
        let fan = Fan::normal_fan(&simplex2()).unwrap();
        for v in [
            QVec::from_ints(&[1, 1]),
            QVec::from_ints(&[-3, 2]),
            QVec::from_ints(&[0, -1]),
            QVec::from_ints(&[5, 0]),
        ] {
            let i = fan.locate(&v).unwrap();
            assert!(fan.cone_contains(&fan.max_cones()[i].clone(), &v));
        }
    }

    #[test]
    fn cone_coordinates_reconstruct() {
        let fan = Fan::normal_fan(&simplex2()).unwrap();
        let v = QVec::from_ints(&[2, 3]);
        let ci = fan.locate(&v).unwrap();
        let cone = fan.max_cones()[ci].clone();
        let combo = fan.cone_coordinates(&cone, &v).unwrap();
        let mut recon = QVec::zero(2);
        for (i, lam) in combo {
            recon = &recon + &fan.rays()[i].scale(&lam);
        }
        assert_eq!(recon, v);
    }

    #[test]
    fn cone_linear_data_solves_and_rejects() {
        let fan = Fan::normal_fan(&simplex2()).unwrap();
        let e1 = fan.ray_index(&QVec::from_ints(&[1, 0])).unwrap();
        let e2 = fan.ray_index(&QVec::from_ints(&[0, 1])).unwrap();
        let m = fan
            .cone_linear_data(&[e1, e2], &[rat_int(3), rat(1, 2)])
            .unwrap();
        assert_eq!(m, QVec::new(vec![rat_int(3), rat(1, 2)]));
        // Overdetermined inconsistent data has no linear extension.
        let all = vec![0, 1, 2];
        let bad = fan.cone_linear_data(&all, &[rat_int(1), rat_int(1), rat_int(1)]);
        // rays e1, e2, -e1-e2: values 1,1,1 would need <m,e1>=1, <m,e2>=1,
        // <m,-e1-e2>=1, but the sum of the three rays is zero.
        assert!(bad.is_none());
    }
}
