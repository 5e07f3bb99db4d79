//! Exact rational convex polytopes with synchronized vertex and
//! half-space representations.
//!
//! Construction always certifies that the two representations describe the
//! same set. Lower-dimensional ("degenerate") polytopes are first-class:
//! they carry affine-hull equations, have volume zero, and participate in
//! Minkowski sums and mixed volumes.

use crate::error::{Error, Result};
use crate::linalg::{integer_kernel_basis, kernel_basis, QMatrix};
use crate::rational::{denominator_lcm, factorial, Rational};
use crate::vector::QVec;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{HashMap, HashSet};

/// Closed half-space `<u, normal> >= offset` with inward normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: QVec,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: QVec, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, p: &QVec) -> bool {
        p.dot(&self.normal) >= self.offset
    }

    pub fn is_tight(&self, p: &QVec) -> bool {
        p.dot(&self.normal) == self.offset
    }

    /// Rescales so the normal is a primitive integer vector.
    pub(crate) fn primitivized(&self) -> Halfspace {
        let prim = self.normal.primitive();
        if prim.is_zero() {
            return self.clone();
        }
        // normal = s * prim with s > 0; the offset scales by the same factor.
        let idx = prim.coords().iter().position(|c| !c.is_zero()).unwrap();
        let s = self.normal.coord(idx) / prim.coord(idx);
        debug_assert!(s > Rational::zero());
        Halfspace {
            normal: prim,
            offset: &self.offset / &s,
        }
    }
}

/// Affine-hull equation `<u, normal> = value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineEquation {
    pub normal: QVec,
    pub value: Rational,
}

/// A bounded rational polytope. `facets` cut the polytope inside the affine
/// hull described by `equalities`; for full-dimensional polytopes the
/// equality list is empty and every facet normal is a primitive integer
/// vector.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    ambient: usize,
    vertices: Vec<QVec>,
    facets: Vec<Halfspace>,
    equalities: Vec<AffineEquation>,
    affine_dim: Option<usize>,
    /// Boundary triangulation for exact volume and centroid integrals:
    /// simplices index into `tri_points` (which may contain boundary points
    /// that are not vertices). Present only for full-dimensional polytopes.
    tri_points: Vec<QVec>,
    boundary_simplices: Vec<Vec<usize>>,
    interior_point: Option<QVec>,
}

impl LatticePolytope {
    /// The empty polytope in the given ambient dimension.
    pub fn empty(ambient: usize) -> Self {
        LatticePolytope {
            ambient,
            vertices: Vec::new(),
            facets: Vec::new(),
            equalities: Vec::new(),
            affine_dim: None,
            tri_points: Vec::new(),
            boundary_simplices: Vec::new(),
            interior_point: None,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension; errors on the empty polytope.
    pub fn affine_dim(&self) -> Result<usize> {
        self.affine_dim.ok_or(Error::EmptyPolytope)
    }

    pub fn is_full_dim(&self) -> bool {
        self.affine_dim == Some(self.ambient)
    }

    /// Minimal vertex list, sorted lexicographically.
    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn equalities(&self) -> &[AffineEquation] {
        &self.equalities
    }

    pub fn contains(&self, p: &QVec) -> bool {
        if self.is_empty() || p.dim() != self.ambient {
            return false;
        }
        self.equalities.iter().all(|e| p.dot(&e.normal) == e.value)
            && self.facets.iter().all(|h| h.contains(p))
    }

    /// Indices (into `vertices`) of the vertices lying on facet `i`.
    pub fn facet_vertex_indices(&self, i: usize) -> Vec<usize> {
        let h = &self.facets[i];
        (0..self.vertices.len())
            .filter(|&j| h.is_tight(&self.vertices[j]))
            .collect()
    }

    /// Exact Euclidean volume; zero for degenerate polytopes.
    pub fn volume(&self) -> Rational {
        if !self.is_full_dim() || self.ambient == 0 {
            return Rational::zero();
        }
        let c = self.interior_point.clone().unwrap();
        let mut vol = Rational::zero();
        for s in &self.boundary_simplices {
            vol += self.cone_volume(&c, s);
        }
        vol
    }

    fn cone_volume(&self, apex: &QVec, simplex: &[usize]) -> Rational {
        let d = self.ambient;
        let rows: Vec<QVec> = simplex
            .iter()
            .map(|&i| &self.tri_points[i] - apex)
            .collect();
        debug_assert_eq!(rows.len(), d);
        let det = crate::linalg::determinant(&QMatrix::from_rows(&rows));
        det.abs() / factorial(d)
    }

    /// Exact centroid with respect to Lebesgue measure.
    pub fn barycenter(&self) -> Result<QVec> {
        if !self.is_full_dim() {
            return Err(Error::Degenerate(
                "barycenter requires a full-dimensional polytope".into(),
            ));
        }
        let c = self.interior_point.clone().unwrap();
        let d = self.ambient;
        let mut total = Rational::zero();
        let mut acc = QVec::zero(d);
        let div = Rational::from_integer(BigInt::from(d as i64 + 1));
        for s in &self.boundary_simplices {
            let v = self.cone_volume(&c, s);
            if v.is_zero() {
                continue;
            }
            let mut centroid = c.clone();
            for &i in s {
                centroid = &centroid + &self.tri_points[i];
            }
            centroid = centroid.scale(&div.recip());
            acc = &acc + &centroid.scale(&v);
            total += v;
        }
        Ok(acc.scale(&total.recip()))
    }

    /// Exact integral of the affine function `<a, u> + b` over the polytope.
    pub fn integrate_affine(&self, a: &QVec, b: &Rational) -> Rational {
        if !self.is_full_dim() {
            return Rational::zero();
        }
        let c = self.interior_point.clone().unwrap();
        let d = self.ambient;
        let mut acc = Rational::zero();
        let div = Rational::from_integer(BigInt::from(d as i64 + 1));
        for s in &self.boundary_simplices {
            let v = self.cone_volume(&c, s);
            if v.is_zero() {
                continue;
            }
            let mut centroid = c.clone();
            for &i in s {
                centroid = &centroid + &self.tri_points[i];
            }
            centroid = centroid.scale(&div.recip());
            acc += v * (centroid.dot(a) + b);
        }
        acc
    }

    /// Dilation by a nonnegative rational factor.
    pub fn scaled(&self, k: &Rational) -> LatticePolytope {
        if self.is_empty() {
            return self.clone();
        }
        let pts: Vec<QVec> = self.vertices.iter().map(|v| v.scale(k)).collect();
        hull(&pts).expect("scaling preserves hull validity")
    }

    pub fn translated(&self, t: &QVec) -> LatticePolytope {
        if self.is_empty() {
            return self.clone();
        }
        let pts: Vec<QVec> = self.vertices.iter().map(|v| v + t).collect();
        hull(&pts).expect("translation preserves hull validity")
    }

    /// `P ∩ { u : <u, v> >= c }`, possibly empty or degenerate.
    pub fn slice(&self, v: &QVec, c: &Rational) -> LatticePolytope {
        if self.is_empty() {
            return self.clone();
        }
        let mut candidates: Vec<QVec> = Vec::new();
        let vals: Vec<Rational> = self.vertices.iter().map(|p| p.dot(v)).collect();
        for (p, val) in self.vertices.iter().zip(&vals) {
            if val >= c {
                candidates.push(p.clone());
            }
        }
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let (a, b) = (&vals[i], &vals[j]);
                if (a > c && b < c) || (a < c && b > c) {
                    // point p_i + t (p_j - p_i) with value exactly c
                    let t = (c - a) / (b - a);
                    let dir = &self.vertices[j] - &self.vertices[i];
                    candidates.push(&self.vertices[i] + &dir.scale(&t));
                }
            }
        }
        if candidates.is_empty() {
            return LatticePolytope::empty(self.ambient);
        }
        hull(&candidates).expect("slice candidates are a valid point set")
    }

    /// Exact optimum of `<objective, u>` over the polytope plus an attaining
    /// vertex (lexicographically smallest among optima).
    pub fn optimize(&self, objective: &QVec, maximize: bool) -> Result<(Rational, QVec)> {
        if self.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let mut best: Option<(Rational, QVec)> = None;
        for p in &self.vertices {
            let val = p.dot(objective);
            let better = match &best {
                None => true,
                Some((bv, bp)) => {
                    if maximize {
                        val > *bv || (val == *bv && p < bp)
                    } else {
                        val < *bv || (val == *bv && p < bp)
                    }
                }
            };
            if better {
                best = Some((val, p.clone()));
            }
        }
        Ok(best.unwrap())
    }

    pub fn min_value(&self, objective: &QVec) -> Result<Rational> {
        Ok(self.optimize(objective, false)?.0)
    }

    pub fn max_value(&self, objective: &QVec) -> Result<Rational> {
        Ok(self.optimize(objective, true)?.0)
    }

    /// Lattice-normalized volume of facet `i`: the (n-1)-volume measured so
    /// a fundamental cell of the facet lattice has volume one. The facet
    /// normal must be an integer vector.
    pub fn facet_lattice_volume(&self, i: usize) -> Result<Rational> {
        let (facet_poly, _, _) = self.facet_in_lattice_coords(i)?;
        match facet_poly {
            None => Ok(Rational::one()), // 0-dimensional facet
            Some(fp) => Ok(fp.volume()),
        }
    }

    /// Lattice-normalized integral of the affine function `<a, u> + b`
    /// over facet `i` (same normalization as `facet_lattice_volume`).
    pub fn facet_lattice_integral(&self, i: usize, a: &QVec, b: &Rational) -> Result<Rational> {
        let (facet_poly, base, basis) = self.facet_in_lattice_coords(i)?;
        let Some(fp) = facet_poly else {
            // 0-dimensional facet: the integral is the value at the point.
            return Ok(base.dot(a) + b);
        };
        // Pull the affine function back through u = base + B w.
        let mut a_proj = Vec::with_capacity(basis.len());
        for bv in &basis {
            let col = QVec::new(
                bv.iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect(),
            );
            a_proj.push(col.dot(a));
        }
        let b_proj = base.dot(a) + b;
        Ok(fp.integrate_affine(&QVec::new(a_proj), &b_proj))
    }

    /// Facet `i` expressed in facet-lattice coordinates: the projected
    /// polytope (None when 0-dimensional), the base vertex and the integer
    /// kernel basis used.
    fn facet_in_lattice_coords(
        &self,
        i: usize,
    ) -> Result<(Option<LatticePolytope>, QVec, Vec<Vec<BigInt>>)> {
        let h = &self.facets[i];
        if !h.normal.is_integral() {
            return Err(Error::NotIntegral(format!("facet normal {:?}", h.normal)));
        }
        let idxs = self.facet_vertex_indices(i);
        if idxs.is_empty() {
            return Err(Error::InvalidInput("facet without vertices".into()));
        }
        let normal_ints = h.normal.to_bigints()?;
        let basis = integer_kernel_basis(&normal_ints);
        let d = basis.len();
        let base = self.vertices[idxs[0]].clone();
        if d == 0 {
            return Ok((None, base, basis));
        }
        let mut mat = QMatrix::zero(self.ambient, d);
        for (j, b) in basis.iter().enumerate() {
            for (r, x) in b.iter().enumerate() {
                mat[(r, j)] = Rational::from_integer(x.clone());
            }
        }
        let mut projected = Vec::new();
        for &vi in &idxs {
            let rhs: Vec<Rational> = (&self.vertices[vi] - &base)
                .coords()
                .to_vec();
            let coords = crate::linalg::solve_any(&mat, &rhs)
                .ok_or_else(|| Error::InvalidInput("facet vertex outside facet plane".into()))?;
            projected.push(QVec::new(coords));
        }
        let fp = hull(&projected)?;
        Ok((Some(fp), base, basis))
    }

    /// All integer points of the dilation `k * P`.
    pub fn lattice_points(&self, k: u64) -> Result<Vec<QVec>> {
        let mut out = Vec::new();
        self.for_each_lattice_point(k, |coords| {
            out.push(QVec::new(
                coords
                    .iter()
                    .map(|&c| Rational::from_integer(BigInt::from(c)))
                    .collect(),
            ));
        })?;
        Ok(out)
    }

    /// Number of integer points of `k * P`.
    pub fn lattice_point_count(&self, k: u64) -> Result<BigInt> {
        let mut count = BigInt::zero();
        self.for_each_lattice_point(k, |_| count += 1)?;
        Ok(count)
    }

    /// Enumerates the integer points of `k * P` column by column: the first
    /// n-1 coordinates range over an integer box, the last coordinate over
    /// an exactly computed interval. Runs in scaled integer arithmetic.
    pub fn for_each_lattice_point<F: FnMut(&[i128])>(&self, k: u64, mut f: F) -> Result<()> {
        if self.is_empty() {
            return Ok(());
        }
        let n = self.ambient;
        if n == 0 || k == 0 {
            f(&vec![0i128; n]);
            return Ok(());
        }
        let kq = Rational::from_integer(BigInt::from(k));
        let mut ineqs: Vec<(Vec<i128>, i128)> = Vec::new();
        for h in &self.facets {
            push_integer_constraint(&h.normal, &h.offset * &kq, false, &mut ineqs)?;
        }
        for e in &self.equalities {
            push_integer_constraint(&e.normal, &e.value * &kq, true, &mut ineqs)?;
        }
        // Integer bounding box from the scaled vertices.
        let mut lo = vec![i128::MAX; n];
        let mut hi = vec![i128::MIN; n];
        for v in &self.vertices {
            for (i, c) in v.coords().iter().enumerate() {
                let scaled = c * &kq;
                let fl = scaled
                    .floor()
                    .to_integer()
                    .to_i128()
                    .ok_or_else(|| Error::OutOfRange("vertex too large".into()))?;
                let ce = scaled
                    .ceil()
                    .to_integer()
                    .to_i128()
                    .ok_or_else(|| Error::OutOfRange("vertex too large".into()))?;
                lo[i] = lo[i].min(fl);
                hi[i] = hi[i].max(ce);
            }
        }
        let mut point = vec![0i128; n];
        enumerate_columns(&ineqs, &lo, &hi, &mut point, 0, &mut f);
        Ok(())
    }

    /// Certifies that the stored vertex and half-space representations
    /// describe the same set.
    pub fn certify(&self) -> Result<()> {
        if self.is_empty() {
            return Ok(());
        }
        let d = self.affine_dim()?;
        for v in &self.vertices {
            for e in &self.equalities {
                if v.dot(&e.normal) != e.value {
                    return Err(Error::InvalidInput("vertex violates affine hull".into()));
                }
            }
            for h in &self.facets {
                if !h.contains(v) {
                    return Err(Error::InvalidInput("vertex violates facet".into()));
                }
            }
        }
        if d == 0 {
            return Ok(());
        }
        for i in 0..self.facets.len() {
            let idxs = self.facet_vertex_indices(i);
            if idxs.len() < d {
                return Err(Error::InvalidInput("facet with too few vertices".into()));
            }
            let base = &self.vertices[idxs[0]];
            let rows: Vec<QVec> = idxs[1..]
                .iter()
                .map(|&j| &self.vertices[j] - base)
                .collect();
            if QMatrix::from_rows(&rows).rank() != d - 1 {
                return Err(Error::InvalidInput("facet not of full facet rank".into()));
            }
        }
        // Each vertex must be pinned by facet normals (and affine-hull
        // normals) of full ambient rank.
        for v in &self.vertices {
            let mut tight: Vec<QVec> = self
                .facets
                .iter()
                .filter(|h| h.is_tight(v))
                .map(|h| h.normal.clone())
                .collect();
            for e in &self.equalities {
                tight.push(e.normal.clone());
            }
            if QMatrix::from_rows(&tight).rank() != self.ambient {
                return Err(Error::InvalidInput("vertex not pinned by facets".into()));
            }
        }
        Ok(())
    }
}

fn push_integer_constraint(
    normal: &QVec,
    bound: Rational,
    eq: bool,
    ineqs: &mut Vec<(Vec<i128>, i128)>,
) -> Result<()> {
    let den = denominator_lcm(normal.coords().iter().chain(std::iter::once(&bound)));
    let denq = Rational::from_integer(den);
    let a: Vec<i128> = normal
        .coords()
        .iter()
        .map(|c| {
            (c * &denq)
                .to_integer()
                .to_i128()
                .ok_or_else(|| Error::OutOfRange("constraint too large".into()))
        })
        .collect::<Result<_>>()?;
    let b = (&bound * &denq)
        .to_integer()
        .to_i128()
        .ok_or_else(|| Error::OutOfRange("constraint too large".into()))?;
    if eq {
        ineqs.push((a.iter().map(|x| -x).collect(), -b));
    }
    ineqs.push((a, b));
    Ok(())
}

fn enumerate_columns<F: FnMut(&[i128])>(
    ineqs: &[(Vec<i128>, i128)],
    lo: &[i128],
    hi: &[i128],
    point: &mut Vec<i128>,
    depth: usize,
    f: &mut F,
) {
    let n = lo.len();
    if depth == n - 1 {
        let mut lo_bound = lo[depth];
        let mut hi_bound = hi[depth];
        for (a, b) in ineqs {
            let partial: i128 = (0..depth).map(|i| a[i] * point[i]).sum();
            let an = a[depth];
            let rhs = b - partial;
            if an > 0 {
                lo_bound = lo_bound.max(div_ceil_i128(rhs, an));
            } else if an < 0 {
                hi_bound = hi_bound.min(div_floor_i128(rhs, an));
            } else if rhs > 0 {
                return; // prefix infeasible
            }
        }
        for x in lo_bound..=hi_bound {
            point[depth] = x;
            f(point);
        }
        return;
    }
    for x in lo[depth]..=hi[depth] {
        point[depth] = x;
        let feasible = ineqs.iter().all(|(a, b)| {
            if a[depth + 1..].iter().any(|&c| c != 0) {
                return true;
            }
            let val: i128 = (0..=depth).map(|i| a[i] * point[i]).sum();
            val >= *b
        });
        if feasible {
            enumerate_columns(ineqs, lo, hi, point, depth + 1, f);
        }
    }
}

fn div_floor_i128(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil_i128(a: i128, b: i128) -> i128 {
    -div_floor_i128(-a, b)
}

/// Convex hull of a nonempty point set: minimal vertex representation and a
/// certified facet representation.
pub fn hull(points: &[QVec]) -> Result<LatticePolytope> {
    if points.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let ambient = points[0].dim();
    for p in points {
        points[0].checked_same_dim(p)?;
    }
    let mut pts: Vec<QVec> = points.to_vec();
    pts.sort();
    pts.dedup();

    // Affine hull: greedy affine basis.
    let base = pts[0].clone();
    let mut dirs: Vec<QVec> = Vec::new();
    let mut basis_points = vec![base.clone()];
    for p in &pts[1..] {
        let d = p - &base;
        let mut rows = dirs.clone();
        rows.push(d.clone());
        if QMatrix::from_rows(&rows).rank() == dirs.len() + 1 {
            dirs.push(d);
            basis_points.push(p.clone());
        }
        if dirs.len() == ambient {
            break;
        }
    }
    let affine_dim = dirs.len();

    if affine_dim == ambient && ambient > 0 {
        return hull_full_dim(pts, basis_points, ambient);
    }

    // Degenerate: record the affine hull, project to a full-dimensional
    // coordinate subspace, hull there, and lift.
    let eq_normals = kernel_basis(&QMatrix::from_rows(&dirs));
    let equalities: Vec<AffineEquation> = if affine_dim == 0 && ambient > 0 {
        (0..ambient)
            .map(|i| AffineEquation {
                normal: QVec::unit(ambient, i),
                value: base.coord(i).clone(),
            })
            .collect()
    } else {
        eq_normals
            .iter()
            .map(|nrm| {
                let prim = nrm.primitive();
                let value = base.dot(&prim);
                AffineEquation {
                    normal: prim,
                    value,
                }
            })
            .collect()
    };

    if affine_dim == 0 {
        return Ok(LatticePolytope {
            ambient,
            vertices: vec![pts[0].clone()],
            facets: Vec::new(),
            equalities,
            affine_dim: Some(0),
            tri_points: Vec::new(),
            boundary_simplices: Vec::new(),
            interior_point: None,
        });
    }

    // Pivot columns of the direction matrix give coordinates on which the
    // projection is injective over the affine hull.
    let proj_coords = pivot_columns(&dirs, affine_dim);
    debug_assert_eq!(proj_coords.len(), affine_dim);
    let project = |p: &QVec| QVec::new(proj_coords.iter().map(|&c| p.coord(c).clone()).collect());
    let projected: Vec<QVec> = pts.iter().map(|p| project(p)).collect();
    let inner = hull(&projected)?;
    debug_assert!(inner.is_full_dim());

    let mut back: HashMap<QVec, QVec> = HashMap::new();
    for (orig, proj) in pts.iter().zip(&projected) {
        back.insert(proj.clone(), orig.clone());
    }
    let mut vertices: Vec<QVec> = inner.vertices().iter().map(|pv| back[pv].clone()).collect();
    vertices.sort();
    let facets: Vec<Halfspace> = inner
        .facets()
        .iter()
        .map(|h| {
            let mut coords = vec![Rational::zero(); ambient];
            for (j, &c) in proj_coords.iter().enumerate() {
                coords[c] = h.normal.coord(j).clone();
            }
            Halfspace {
                normal: QVec::new(coords),
                offset: h.offset.clone(),
            }
        })
        .collect();

    let poly = LatticePolytope {
        ambient,
        vertices,
        facets,
        equalities,
        affine_dim: Some(affine_dim),
        tri_points: Vec::new(),
        boundary_simplices: Vec::new(),
        interior_point: None,
    };
    poly.certify()?;
    Ok(poly)
}

fn pivot_columns(dirs: &[QVec], rank: usize) -> Vec<usize> {
    let mut m = QMatrix::from_rows(dirs);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows || pivots.len() == rank {
            break;
        }
        if let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) {
            for j in 0..m.cols {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(row, j)].clone();
                m[(row, j)] = tmp;
            }
            let inv = m[(row, col)].recip();
            for r in row + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for j in col..m.cols {
                    let v = &m[(r, j)] - &(&factor * &m[(row, j)]);
                    m[(r, j)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
    }
    pivots
}

struct BbFacet {
    verts: Vec<usize>,
    /// Outward normal: `<x, normal> <= offset` on the hull.
    normal: QVec,
    offset: Rational,
    alive: bool,
}

fn hull_full_dim(
    pts: Vec<QVec>,
    basis_points: Vec<QVec>,
    ambient: usize,
) -> Result<LatticePolytope> {
    let d = ambient;
    // Interior reference: centroid of the starting simplex.
    let mut interior = QVec::zero(d);
    for p in &basis_points {
        interior = &interior + p;
    }
    interior = interior.scale(&Rational::new(BigInt::one(), BigInt::from(d as i64 + 1)));

    let idx_of: HashMap<QVec, usize> = pts.iter().cloned().zip(0..).collect();
    let simplex_idx: Vec<usize> = basis_points.iter().map(|p| idx_of[p]).collect();

    let mut facets: Vec<BbFacet> = Vec::new();
    for skip in 0..=d {
        let verts: Vec<usize> = simplex_idx
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v)
            .collect();
        facets.push(make_facet(&pts, &verts, &interior)?);
    }

    let in_simplex: HashSet<usize> = simplex_idx.iter().copied().collect();
    for q in 0..pts.len() {
        if in_simplex.contains(&q) {
            continue;
        }
        let qp = &pts[q];
        let visible: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && qp.dot(&f.normal) > f.offset)
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            continue;
        }
        // Horizon ridges: (d-1)-subsets occurring exactly once among the
        // visible facets.
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for &fi in &visible {
            let verts = &facets[fi].verts;
            for skip in 0..verts.len() {
                let mut ridge: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                ridge.sort_unstable();
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        for &fi in &visible {
            facets[fi].alive = false;
        }
        for (ridge, count) in ridge_count {
            if count != 1 {
                continue;
            }
            let mut verts = ridge;
            verts.push(q);
            facets.push(make_facet(&pts, &verts, &interior)?);
        }
        facets.retain(|f| f.alive);
    }

    // Merge coplanar simplicial facets into supporting hyperplanes with
    // primitive integer inward normals.
    let mut merged: Vec<Halfspace> = Vec::new();
    let mut seen: HashSet<(QVec, Rational)> = HashSet::new();
    for f in &facets {
        let inward = Halfspace {
            normal: -&f.normal,
            offset: -f.offset.clone(),
        }
        .primitivized();
        if seen.insert((inward.normal.clone(), inward.offset.clone())) {
            merged.push(inward);
        }
    }
    merged.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));

    // Minimal vertex set: points pinned by d independent tight facets.
    let mut vertices: Vec<QVec> = Vec::new();
    for p in &pts {
        let tight: Vec<QVec> = merged
            .iter()
            .filter(|h| h.is_tight(p))
            .map(|h| h.normal.clone())
            .collect();
        if tight.len() >= d && QMatrix::from_rows(&tight).rank() == d {
            vertices.push(p.clone());
        }
    }
    vertices.sort();

    // Keep the simplicial boundary complex for exact integrals. It may
    // reference boundary points that are not vertices of the merged hull.
    let mut tri_points: Vec<QVec> = Vec::new();
    let mut tri_index: HashMap<usize, usize> = HashMap::new();
    let mut simplices = Vec::new();
    for f in &facets {
        let mut ids = Vec::with_capacity(d);
        for &vi in &f.verts {
            let id = *tri_index.entry(vi).or_insert_with(|| {
                tri_points.push(pts[vi].clone());
                tri_points.len() - 1
            });
            ids.push(id);
        }
        simplices.push(ids);
    }

    let poly = LatticePolytope {
        ambient,
        vertices,
        facets: merged,
        equalities: Vec::new(),
        affine_dim: Some(d),
        tri_points,
        boundary_simplices: simplices,
        interior_point: Some(interior),
    };
    poly.certify()?;
    Ok(poly)
}

fn make_facet(pts: &[QVec], verts: &[usize], interior: &QVec) -> Result<BbFacet> {
    let d = pts[0].dim();
    debug_assert_eq!(verts.len(), d);
    let base = &pts[verts[0]];
    let dirs: Vec<QVec> = verts[1..].iter().map(|&v| &pts[v] - base).collect();
    let mut dir_matrix = QMatrix::zero(dirs.len(), d);
    for (i, row) in dirs.iter().enumerate() {
        for (j, v) in row.coords().iter().enumerate() {
            dir_matrix[(i, j)] = v.clone();
        }
    }
    let kern = kernel_basis(&dir_matrix);
    if kern.len() != 1 {
        return Err(Error::InvalidInput("degenerate facet candidate".into()));
    }
    let mut normal = kern.into_iter().next().unwrap();
    let mut offset = base.dot(&normal);
    match interior.dot(&normal).cmp(&offset) {
        std::cmp::Ordering::Less => {}
        std::cmp::Ordering::Greater => {
            normal = -&normal;
            offset = -offset;
        }
        std::cmp::Ordering::Equal => {
            return Err(Error::InvalidInput("interior point on facet plane".into()))
        }
    }
    Ok(BbFacet {
        verts: verts.to_vec(),
        normal,
        offset,
        alive: true,
    })
}

/// Vertex enumeration for a bounded halfspace system. Errors when the
/// system is infeasible (empty) or unbounded.
pub fn from_halfspaces(ambient: usize, halfspaces: &[Halfspace]) -> Result<LatticePolytope> {
    if ambient == 0 {
        return Err(Error::InvalidInput("ambient dimension zero".into()));
    }
    // Boundedness: the recession cone {v : <v, a_i> >= 0} must be trivial.
    let mut rec_constraints: Vec<Halfspace> = halfspaces
        .iter()
        .map(|h| Halfspace::new(h.normal.clone(), Rational::zero()))
        .collect();
    for i in 0..ambient {
        rec_constraints.push(Halfspace::new(QVec::unit(ambient, i), -Rational::one()));
        rec_constraints.push(Halfspace::new(-&QVec::unit(ambient, i), -Rational::one()));
    }
    let rec_vertices = enumerate_basic_solutions(ambient, &rec_constraints);
    if rec_vertices.iter().any(|v| !v.is_zero()) {
        return Err(Error::Unbounded);
    }

    let vertices = enumerate_basic_solutions(ambient, halfspaces);
    if vertices.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let poly = hull(&vertices)?;
    // Sanity: every input halfspace must contain the hull.
    for h in halfspaces {
        for v in poly.vertices() {
            if !h.contains(v) {
                return Err(Error::InvalidInput(
                    "halfspace system inconsistent with hull".into(),
                ));
            }
        }
    }
    Ok(poly)
}

/// All feasible basic solutions of the system (candidate vertices).
fn enumerate_basic_solutions(ambient: usize, halfspaces: &[Halfspace]) -> Vec<QVec> {
    let m = halfspaces.len();
    let mut found: HashSet<QVec> = HashSet::new();
    let mut subset: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        need: usize,
        m: usize,
        subset: &mut Vec<usize>,
        halfspaces: &[Halfspace],
        ambient: usize,
        found: &mut HashSet<QVec>,
    ) {
        if need == 0 {
            let mut mat = QMatrix::zero(ambient, ambient);
            let mut rhs = Vec::with_capacity(ambient);
            for (r, &i) in subset.iter().enumerate() {
                for c in 0..ambient {
                    mat[(r, c)] = halfspaces[i].normal.coord(c).clone();
                }
                rhs.push(halfspaces[i].offset.clone());
            }
            if let Ok(x) = crate::linalg::solve_square(&mat, &rhs) {
                let p = QVec::new(x);
                if halfspaces.iter().all(|h| h.contains(&p)) {
                    found.insert(p);
                }
            }
            return;
        }
        for i in start..m {
            subset.push(i);
            rec(i + 1, need - 1, m, subset, halfspaces, ambient, found);
            subset.pop();
        }
    }
    rec(0, ambient, m, &mut subset, halfspaces, ambient, &mut found);
    let mut out: Vec<QVec> = found.into_iter().collect();
    out.sort();
    out
}
