//! Univariate rational polynomials, piecewise polynomials, and convex
//! piecewise-linear functions on polytopes.

use crate::error::{Error, Result};
use crate::linalg::{solve_square, QMatrix};
use crate::polytope::{from_halfspaces, Halfspace, LatticePolytope};
use crate::rational::Rational;
use crate::vector::QVec;
use num_bigint::BigInt;
use num_traits::Zero;

/// Dense univariate polynomial with rational coefficients,
/// `coeffs[k]` the coefficient of `x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coefficient(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// The unique polynomial of degree < points.len() through the points.
    /// Abscissae must be pairwise distinct.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Poly {
        let m = points.len();
        if m == 0 {
            return Poly::zero();
        }
        // Vandermonde solve; sizes here are tiny (degree <= n+2).
        let mut mat = QMatrix::zero(m, m);
        let mut rhs = Vec::with_capacity(m);
        for (i, (x, y)) in points.iter().enumerate() {
            let mut p = Rational::from_integer(BigInt::from(1));
            for j in 0..m {
                mat[(i, j)] = p.clone();
                p *= x;
            }
            rhs.push(y.clone());
        }
        let coeffs = solve_square(&mat, &rhs).expect("distinct abscissae");
        Poly::new(coeffs)
    }

    /// Exact antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] = c / Rational::from_integer(BigInt::from(k as i64 + 1));
        }
        Poly::new(coeffs)
    }

    /// Exact definite integral over `[a, b]`.
    pub fn integral(&self, a: &Rational, b: &Rational) -> Rational {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }
}

/// Continuous piecewise polynomial on `[0, infinity)`: `polys[i]` applies on
/// `[breakpoints[i], breakpoints[i+1]]`, and the function is identically
/// zero past the last breakpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePolynomial {
    pub breakpoints: Vec<Rational>,
    pub polys: Vec<Poly>,
}

impl PiecewisePolynomial {
    /// Validates the shape invariants: strictly increasing breakpoints,
    /// one polynomial per interval, continuity across interior breakpoints,
    /// and vanishing at the final breakpoint.
    pub fn new(breakpoints: Vec<Rational>, polys: Vec<Poly>) -> Result<Self> {
        if breakpoints.len() != polys.len() + 1 {
            return Err(Error::InvalidInput(
                "need exactly one polynomial per breakpoint interval".into(),
            ));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInput("breakpoints must increase".into()));
            }
        }
        for i in 1..polys.len() {
            let x = &breakpoints[i];
            if polys[i - 1].eval(x) != polys[i].eval(x) {
                return Err(Error::InvalidInput(
                    "discontinuous across a breakpoint".into(),
                ));
            }
        }
        if let (Some(last), Some(poly)) = (breakpoints.last(), polys.last()) {
            if !poly.eval(last).is_zero() {
                return Err(Error::InvalidInput(
                    "must vanish at the final breakpoint".into(),
                ));
            }
        }
        Ok(PiecewisePolynomial { breakpoints, polys })
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        if self.breakpoints.is_empty() || x >= self.breakpoints.last().unwrap() {
            return Rational::zero();
        }
        if x < &self.breakpoints[0] {
            return self.polys[0].eval(x);
        }
        for i in 0..self.polys.len() {
            if x >= &self.breakpoints[i] && x <= &self.breakpoints[i + 1] {
                return self.polys[i].eval(x);
            }
        }
        Rational::zero()
    }

    /// Exact integral over the whole support.
    pub fn total_integral(&self) -> Rational {
        let mut acc = Rational::zero();
        for (i, poly) in self.polys.iter().enumerate() {
            acc += poly.integral(&self.breakpoints[i], &self.breakpoints[i + 1]);
        }
        acc
    }
}

/// An affine form `<a, u> + b` on an n-dimensional domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub linear: QVec,
    pub constant: Rational,
}

impl AffineForm {
    pub fn new(linear: QVec, constant: Rational) -> Self {
        AffineForm { linear, constant }
    }

    pub fn eval(&self, u: &QVec) -> Rational {
        u.dot(&self.linear) + &self.constant
    }
}

/// A convex piecewise-linear function on a full-dimensional polytope,
/// stored as the upper envelope (pointwise maximum) of affine pieces
/// together with the full-dimensional cells on which each piece is active.
/// Inactive pieces are dropped at construction, so the cells tile the
/// domain and the pieces agree on shared cell boundaries.
#[derive(Clone, Debug)]
pub struct PLFunction {
    domain: LatticePolytope,
    pieces: Vec<AffineForm>,
    cells: Vec<LatticePolytope>,
}

impl PLFunction {
    /// Builds the upper envelope of the given affine forms on `domain`.
    pub fn upper_envelope(domain: &LatticePolytope, forms: &[AffineForm]) -> Result<Self> {
        if !domain.is_full_dim() {
            return Err(Error::Degenerate(
                "piecewise-linear domain must be full-dimensional".into(),
            ));
        }
        if forms.is_empty() {
            return Err(Error::InvalidInput("no affine pieces".into()));
        }
        let n = domain.ambient_dim();
        let mut pieces = Vec::new();
        let mut cells = Vec::new();
        for (i, fi) in forms.iter().enumerate() {
            // Cell of piece i: domain cut by f_i >= f_j for all j.
            let mut hs: Vec<Halfspace> = domain
                .facets()
                .iter()
                .map(|h| Halfspace::new(h.normal.clone(), h.offset.clone()))
                .collect();
            for (j, fj) in forms.iter().enumerate() {
                if i == j {
                    continue;
                }
                // <u, a_i - a_j> >= b_j - b_i
                hs.push(Halfspace::new(
                    &fi.linear - &fj.linear,
                    &fj.constant - &fi.constant,
                ));
            }
            match from_halfspaces(n, &hs) {
                Ok(cell) if cell.is_full_dim() => {
                    // Drop exact duplicates of an already-active piece.
                    if pieces.iter().any(|p| p == fi) {
                        continue;
                    }
                    pieces.push(fi.clone());
                    cells.push(cell);
                }
                Ok(_) | Err(Error::EmptyPolytope) => continue,
                Err(e) => return Err(e),
            }
        }
        if pieces.is_empty() {
            return Err(Error::InvalidInput(
                "no piece is active on a full-dimensional cell".into(),
            ));
        }
        Ok(PLFunction {
            domain: domain.clone(),
            pieces,
            cells,
        })
    }

    /// Constant function on the domain.
    pub fn constant(domain: &LatticePolytope, c: Rational) -> Result<Self> {
        let n = domain.ambient_dim();
        Self::upper_envelope(domain, &[AffineForm::new(QVec::zero(n), c)])
    }

    pub fn domain(&self) -> &LatticePolytope {
        &self.domain
    }

    pub fn pieces(&self) -> &[AffineForm] {
        &self.pieces
    }

    pub fn cells(&self) -> &[LatticePolytope] {
        &self.cells
    }

    pub fn eval(&self, u: &QVec) -> Rational {
        self.pieces
            .iter()
            .map(|p| p.eval(u))
            .max()
            .expect("at least one piece")
    }

    /// Exact minimum over the domain; attained at a vertex of the cell
    /// complex since each piece is affine on its cell.
    pub fn min_on_domain(&self) -> Rational {
        self.cell_vertices()
            .iter()
            .map(|v| self.eval(v))
            .min()
            .expect("nonempty cell complex")
    }

    /// Exact maximum over the domain.
    pub fn max_on_domain(&self) -> Rational {
        self.cell_vertices()
            .iter()
            .map(|v| self.eval(v))
            .max()
            .expect("nonempty cell complex")
    }

    /// All vertices of the cell complex (vertices of every active cell).
    pub fn cell_vertices(&self) -> Vec<QVec> {
        let mut out: Vec<QVec> = Vec::new();
        for cell in &self.cells {
            out.extend_from_slice(cell.vertices());
        }
        out.sort();
        out.dedup();
        out
    }

    /// Exact integral over the domain (sum of per-cell affine integrals).
    pub fn integral(&self) -> Rational {
        let mut acc = Rational::zero();
        for (piece, cell) in self.pieces.iter().zip(&self.cells) {
            acc += cell.integrate_affine(&piece.linear, &piece.constant);
        }
        acc
    }

    pub fn mean(&self) -> Rational {
        self.integral() / self.domain.volume()
    }

    pub fn is_constant(&self) -> bool {
        self.min_on_domain() == self.max_on_domain()
    }

    /// Adds a constant to the function.
    pub fn shifted(&self, c: &Rational) -> Self {
        PLFunction {
            domain: self.domain.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| AffineForm::new(p.linear.clone(), &p.constant + c))
                .collect(),
            cells: self.cells.clone(),
        }
    }

    /// Checks that explicitly supplied (cell, form) data is convex, i.e.
    /// the given forms restricted to their cells agree with the upper
    /// envelope of all forms; errors with `NonConvex` otherwise.
    pub fn from_cells(
        domain: &LatticePolytope,
        data: &[(LatticePolytope, AffineForm)],
    ) -> Result<Self> {
        let forms: Vec<AffineForm> = data.iter().map(|(_, f)| f.clone()).collect();
        for (cell, form) in data {
            for other in &forms {
                for v in cell.vertices() {
                    if other.eval(v) > form.eval(v) {
                        return Err(Error::NonConvex(format!(
                            "piece undercut at {v:?}: {} < {}",
                            crate::rational::format_rational(&form.eval(v)),
                            crate::rational::format_rational(&other.eval(v)),
                        )));
                    }
                }
            }
        }
        Self::upper_envelope(domain, &forms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::hull;
    use crate::rational::{rat, rat_int};

    fn interval01() -> LatticePolytope {
        hull(&[QVec::from_ints(&[0]), QVec::from_ints(&[1])]).unwrap()
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        // (1-x)^2 through 3 points
        let pts = vec![
            (rat_int(0), rat_int(1)),
            (rat(1, 2), rat(1, 4)),
            (rat_int(1), rat_int(0)),
        ];
        let p = Poly::interpolate(&pts);
        assert_eq!(p.coefficient(0), rat_int(1));
        assert_eq!(p.coefficient(1), rat_int(-2));
        assert_eq!(p.coefficient(2), rat_int(1));
        assert_eq!(p.integral(&rat_int(0), &rat_int(1)), rat(1, 3));
    }

    #[test]
    fn piecewise_polynomial_validation_and_integral() {
        // (1-x)^2 on [0,1], then zero
        let p = Poly::new(vec![rat_int(1), rat_int(-2), rat_int(1)]);
        let pw = PiecewisePolynomial::new(vec![rat_int(0), rat_int(1)], vec![p]).unwrap();
        assert_eq!(pw.total_integral(), rat(1, 3));
        assert_eq!(pw.eval(&rat(1, 2)), rat(1, 4));
        assert_eq!(pw.eval(&rat_int(2)), rat_int(0));

        // Discontinuity is rejected.
        let jump = PiecewisePolynomial::new(
            vec![rat_int(0), rat_int(1), rat_int(2)],
            vec![
                Poly::new(vec![rat_int(1)]),
                Poly::new(vec![rat_int(4), rat_int(-2)]),
            ],
        );
        assert!(jump.is_err());
    }

    #[test]
    fn upper_envelope_on_interval() {
        // max(0, 2u - 1) on [0, 1]
        let dom = interval01();
        let f = PLFunction::upper_envelope(
            &dom,
            &[
                AffineForm::new(QVec::from_ints(&[0]), rat_int(0)),
                AffineForm::new(QVec::from_ints(&[2]), rat_int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(f.pieces().len(), 2);
        assert_eq!(f.min_on_domain(), rat_int(0));
        assert_eq!(f.max_on_domain(), rat_int(1));
        assert_eq!(f.integral(), rat(1, 4));
        assert_eq!(f.eval(&QVec::new(vec![rat(3, 4)])), rat(1, 2));
        assert!(!f.is_constant());
    }

    #[test]
    fn inactive_pieces_are_dropped() {
        let dom = interval01();
        // u - 10 is dominated everywhere by 0.
        let f = PLFunction::upper_envelope(
            &dom,
            &[
                AffineForm::new(QVec::from_ints(&[0]), rat_int(0)),
                AffineForm::new(QVec::from_ints(&[1]), rat_int(-10)),
            ],
        )
        .unwrap();
        assert_eq!(f.pieces().len(), 1);
        assert!(f.is_constant());
    }

    #[test]
    fn from_cells_rejects_nonconvex_data() {
        let dom = interval01();
        let left = hull(&[QVec::from_ints(&[0]), QVec::new(vec![rat(1, 2)])]).unwrap();
        let right = hull(&[QVec::new(vec![rat(1, 2)]), QVec::from_ints(&[1])]).unwrap();
        // Tent function max is in the middle: concave, not convex.
        let tent_l = AffineForm::new(QVec::from_ints(&[1]), rat_int(0));
        let tent_r = AffineForm::new(QVec::from_ints(&[-1]), rat_int(1));
        let err = PLFunction::from_cells(&dom, &[(left.clone(), tent_l.clone()), (right.clone(), tent_r.clone())]);
        assert!(matches!(err, Err(Error::NonConvex(_))));
        // A genuinely convex V-shape passes.
        let vee_l = AffineForm::new(QVec::from_ints(&[-1]), rat(1, 2));
        let vee_r = AffineForm::new(QVec::from_ints(&[1]), rat(-1, 2));
        let f = PLFunction::from_cells(&dom, &[(left, vee_l), (right, vee_r)]).unwrap();
        assert_eq!(f.min_on_domain(), rat_int(0));
        assert_eq!(f.max_on_domain(), rat(1, 2));
    }

    #[test]
    fn two_dimensional_envelope_cells_tile_the_domain() {
        let square = hull(&[
            QVec::from_ints(&[0, 0]),
            QVec::from_ints(&[1, 0]),
            QVec::from_ints(&[0, 1]),
            QVec::from_ints(&[1, 1]),
        ])
        .unwrap();
        // max(0, x + y - 1)
        let f = PLFunction::upper_envelope(
            &square,
            &[
                AffineForm::new(QVec::from_ints(&[0, 0]), rat_int(0)),
                AffineForm::new(QVec::from_ints(&[1, 1]), rat_int(-1)),
            ],
        )
        .unwrap();
        let total: Rational = f.cells().iter().map(|c| c.volume()).sum();
        assert_eq!(total, rat_int(1));
        assert_eq!(f.integral(), rat(1, 6));
        assert_eq!(f.mean(), rat(1, 6));
    }
}
