//! Polarized toric pairs: torus-invariant divisors, positivity tests,
//! intersection numbers, slopes, log discrepancies, and the nef-cone
//! decomposition with its perturbation radius.

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::QMatrix;
use crate::mixed::mixed_volume;
use crate::polytope::{from_halfspaces, Halfspace, LatticePolytope};
use crate::rational::{factorial, Rational};
use crate::vector::QVec;
use num_traits::{One, Signed, Zero};

/// Torus-invariant Q-divisor: one rational coefficient per fan ray, in the
/// fan's ray order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TDivisor {
    pub coeffs: Vec<Rational>,
}

impl TDivisor {
    pub fn zero(rays: usize) -> Self {
        TDivisor {
            coeffs: vec![Rational::zero(); rays],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= Rational::zero())
    }

    pub fn add(&self, other: &TDivisor) -> TDivisor {
        TDivisor {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &TDivisor) -> TDivisor {
        TDivisor {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> TDivisor {
        TDivisor {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

/// A polarized toric pair `((X, Delta), L)`: the moment polytope `P` of the
/// ample polarization, the normal fan of `P` (rays aligned with the facets
/// of `P`), and boundary coefficients `c_rho in [0,1]` per ray.
#[derive(Clone, Debug)]
pub struct PolarizedToricPair {
    polytope: LatticePolytope,
    fan: Fan,
    boundary: Vec<Rational>,
    n: usize,
}

impl PolarizedToricPair {
    /// Builds a pair from a full-dimensional polytope and boundary
    /// coefficients keyed by primitive ray vector. Rays not mentioned get
    /// coefficient zero; unknown rays and out-of-range coefficients are
    /// rejected, as are degenerate polytopes.
    pub fn new(polytope: LatticePolytope, boundary: &[(QVec, Rational)]) -> Result<Self> {
        if polytope.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        if !polytope.is_full_dim() {
            return Err(Error::Degenerate(
                "polarization polytope must be full-dimensional".into(),
            ));
        }
        let fan = Fan::normal_fan(&polytope)?;
        let n = polytope.ambient_dim();
        let mut coeffs = vec![Rational::zero(); fan.rays().len()];
        for (ray, c) in boundary {
            let idx = fan.ray_index(ray).ok_or_else(|| {
                Error::NotAmple(format!("ray {ray:?} is not a facet normal of the polytope"))
            })?;
            if *c < Rational::zero() || *c > Rational::one() {
                return Err(Error::CoefficientRange(crate::rational::format_rational(c)));
            }
            coeffs[idx] = c.clone();
        }
        let pair = PolarizedToricPair {
            polytope,
            fan,
            boundary: coeffs,
            n,
        };
        // The pair condition: K_X + Delta must be Q-Cartier.
        pair.cartier_data(&pair.log_discrepancy_divisor())
            .map_err(|_| Error::NotQCartier("K_X + Delta".into()))?;
        // Certify strict convexity of the support function of L.
        if !pair.is_ample(&pair.l_divisor()) {
            return Err(Error::NotAmple("polarization support function".into()));
        }
        Ok(pair)
    }

    pub fn from_vertices(points: &[QVec], boundary: &[(QVec, Rational)]) -> Result<Self> {
        Self::new(crate::polytope::hull(points)?, boundary)
    }

    /// A polarized toric variety with empty boundary, skipping the pair
    /// condition (`K_X` need not be Q-Cartier). Used for ambient total
    /// spaces where only divisor positivity and intersection numbers are
    /// consumed.
    pub fn polarized_variety(polytope: LatticePolytope) -> Result<Self> {
        if polytope.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        if !polytope.is_full_dim() {
            return Err(Error::Degenerate(
                "polarization polytope must be full-dimensional".into(),
            ));
        }
        let fan = Fan::normal_fan(&polytope)?;
        let n = polytope.ambient_dim();
        let rays = fan.rays().len();
        let pair = PolarizedToricPair {
            polytope,
            fan,
            boundary: vec![Rational::zero(); rays],
            n,
        };
        if !pair.is_ample(&pair.l_divisor()) {
            return Err(Error::NotAmple("polarization support function".into()));
        }
        Ok(pair)
    }

    pub fn from_halfspace_data(
        ambient: usize,
        halfspaces: &[Halfspace],
        boundary: &[(QVec, Rational)],
    ) -> Result<Self> {
        Self::new(from_halfspaces(ambient, halfspaces)?, boundary)
    }

    /// A pair polarized by `-(K_X + Delta)`: the input polytope only fixes
    /// the fan; the moment polytope is replaced by the anticanonical one.
    /// Errors when `-(K_X + Delta)` is not ample on that fan.
    pub fn anticanonical(
        fan_polytope: &LatticePolytope,
        boundary: &[(QVec, Rational)],
    ) -> Result<Self> {
        let fan = Fan::normal_fan(fan_polytope)?;
        let n = fan_polytope.ambient_dim();
        // -(K + Delta) has coefficient 1 - c_rho on each ray.
        let mut hs = Vec::new();
        let mut pairs = Vec::new();
        for ray in fan.rays() {
            let c = boundary
                .iter()
                .find(|(r, _)| r.primitive() == *ray)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Rational::zero);
            if c < Rational::zero() || c > Rational::one() {
                return Err(Error::CoefficientRange(crate::rational::format_rational(&c)));
            }
            hs.push(Halfspace::new(ray.clone(), &c - &Rational::one()));
            pairs.push((ray.clone(), c));
        }
        let p = from_halfspaces(n, &hs).map_err(|e| match e {
            Error::EmptyPolytope | Error::Unbounded => {
                Error::NotAmple("anticanonical class".into())
            }
            other => other,
        })?;
        let pair = Self::new(p, &pairs)?;
        if pair.fan.rays().len() != fan.rays().len() {
            return Err(Error::NotAmple(
                "anticanonical class is not ample on the given fan".into(),
            ));
        }
        Ok(pair)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn boundary(&self) -> &[Rational] {
        &self.boundary
    }

    /// The polarization as a torus-invariant divisor (facet offsets negated).
    pub fn l_divisor(&self) -> TDivisor {
        TDivisor {
            coeffs: self
                .polytope
                .facets()
                .iter()
                .map(|h| -h.offset.clone())
                .collect(),
        }
    }

    /// Torus-invariant canonical divisor: every coefficient -1.
    pub fn canonical_divisor(&self) -> TDivisor {
        TDivisor {
            coeffs: vec![-Rational::one(); self.fan.rays().len()],
        }
    }

    pub fn boundary_divisor(&self) -> TDivisor {
        TDivisor {
            coeffs: self.boundary.clone(),
        }
    }

    /// `K_X + Delta` as a divisor (coefficients `c_rho - 1`).
    pub fn log_canonical_divisor(&self) -> TDivisor {
        self.canonical_divisor().add(&self.boundary_divisor())
    }

    /// Ray values of the log discrepancy function: `1 - c_rho`.
    fn log_discrepancy_divisor(&self) -> TDivisor {
        TDivisor {
            coeffs: self.boundary.iter().map(|c| Rational::one() - c).collect(),
        }
    }

    /// True when the polarization is `-(K_X + Delta)`.
    pub fn is_anticanonical_polarization(&self) -> bool {
        let l = self.l_divisor();
        l.coeffs
            .iter()
            .zip(&self.boundary)
            .all(|(lr, c)| *lr == Rational::one() - c)
    }

    /// klt iff every boundary coefficient is < 1.
    pub fn is_klt(&self) -> bool {
        self.boundary.iter().all(|c| *c < Rational::one())
    }

    /// lc iff every boundary coefficient is <= 1 (true by construction).
    pub fn is_lc(&self) -> bool {
        self.boundary.iter().all(|c| *c <= Rational::one())
    }

    /// `(L^n) = n! vol(P)`.
    pub fn degree(&self) -> Rational {
        factorial(self.n) * self.polytope.volume()
    }

    /// Section polytope of a divisor: `{ u : <u, v_rho> >= -d_rho }`.
    /// Possibly empty or degenerate.
    pub fn divisor_polytope(&self, d: &TDivisor) -> LatticePolytope {
        let hs: Vec<Halfspace> = self
            .fan
            .rays()
            .iter()
            .zip(&d.coeffs)
            .map(|(ray, c)| Halfspace::new(ray.clone(), -c.clone()))
            .collect();
        match from_halfspaces(self.n, &hs) {
            Ok(p) => p,
            Err(_) => LatticePolytope::empty(self.n),
        }
    }

    /// Cartier data of a divisor: the linear functional `m_sigma` per
    /// maximal cone with `<m_sigma, v_rho> = -d_rho` on the cone's rays.
    pub fn cartier_data(&self, d: &TDivisor) -> Result<Vec<QVec>> {
        let mut out = Vec::with_capacity(self.fan.max_cones().len());
        for cone in self.fan.max_cones() {
            let values: Vec<Rational> = cone.iter().map(|&i| -d.coeffs[i].clone()).collect();
            let m = self
                .fan
                .cone_linear_data(cone, &values)
                .ok_or_else(|| Error::NotQCartier(format!("{d:?}")))?;
            out.push(m);
        }
        Ok(out)
    }

    /// Nef test: the support function exists and is convex across every
    /// wall. Non-Q-Cartier divisors are not nef.
    pub fn is_nef(&self, d: &TDivisor) -> bool {
        self.positivity(d, false)
    }

    /// Ample test: strict convexity across every wall.
    pub fn is_ample(&self, d: &TDivisor) -> bool {
        self.positivity(d, true)
    }

    fn positivity(&self, d: &TDivisor, strict: bool) -> bool {
        let Ok(data) = self.cartier_data(d) else {
            return false;
        };
        for (cone, m) in self.fan.max_cones().iter().zip(&data) {
            for (i, ray) in self.fan.rays().iter().enumerate() {
                if cone.contains(&i) {
                    continue;
                }
                let lhs = m.dot(ray);
                let rhs = -&d.coeffs[i];
                if strict {
                    if lhs <= rhs {
                        return false;
                    }
                } else if lhs < rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Minimal `m >= 0` such that `D + m L` is nef.
    pub fn nef_threshold(&self, d: &TDivisor) -> Result<Rational> {
        let data_d = self.cartier_data(d)?;
        let l = self.l_divisor();
        let data_l = self.cartier_data(&l).expect("polarization is Cartier");
        let mut m_min = Rational::zero();
        for ((cone, md), ml) in self
            .fan
            .max_cones()
            .iter()
            .zip(&data_d)
            .zip(&data_l)
        {
            for (i, ray) in self.fan.rays().iter().enumerate() {
                if cone.contains(&i) {
                    continue;
                }
                // wall defect of D at (sigma, rho): g = <m_sigma, v_rho> + d_rho
                let g_d = md.dot(ray) + &d.coeffs[i];
                let g_l = ml.dot(ray) + &l.coeffs[i];
                debug_assert!(g_l > Rational::zero(), "L must be ample");
                if g_d < Rational::zero() {
                    let need = -&g_d / &g_l;
                    if need > m_min {
                        m_min = need;
                    }
                }
            }
        }
        Ok(m_min)
    }

    /// Exact intersection number `(D_1 ... D_n)` via mixed volumes of
    /// section polytopes, extended beyond nef divisors by writing each
    /// `D = (D + mL) - mL` and expanding multilinearly.
    pub fn intersection_number(&self, divs: &[&TDivisor]) -> Result<Rational> {
        if divs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: divs.len(),
            });
        }
        // For each slot, polytopes appearing with +/- sign.
        let mut slots: Vec<Vec<(LatticePolytope, i8)>> = Vec::with_capacity(self.n);
        for d in divs {
            let m = self.nef_threshold(d)?;
            if m.is_zero() {
                slots.push(vec![(self.divisor_polytope(d), 1)]);
            } else {
                let l = self.l_divisor();
                let a = d.add(&l.scale(&m));
                let pa = self.divisor_polytope(&a);
                let pb = self.polytope.scaled(&m);
                slots.push(vec![(pa, 1), (pb, -1)]);
            }
        }
        let mut acc = Rational::zero();
        let mut choice = vec![0usize; self.n];
        loop {
            let mut bodies: Vec<&LatticePolytope> = Vec::with_capacity(self.n);
            let mut sign = 1i8;
            for (slot, &c) in slots.iter().zip(&choice) {
                bodies.push(&slot[c].0);
                sign *= slot[c].1;
            }
            let mv = mixed_volume(&bodies)?;
            let signed = if sign > 0 { mv } else { -mv };
            acc += signed;
            // advance
            let mut i = 0;
            loop {
                if i == self.n {
                    return Ok(acc * factorial(self.n));
                }
                choice[i] += 1;
                if choice[i] < slots[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// `(L^{n-1} . D)` through the facet formula:
    /// `(n-1)! * sum_rho d_rho latvol(F_rho)`.
    pub fn polarized_product(&self, d: &TDivisor) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (i, c) in d.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += c * self.polytope.facet_lattice_volume(i)?;
        }
        Ok(acc * factorial(self.n - 1))
    }

    /// Slope `mu_D(L) = (L^{n-1} . D) / (L^n)`.
    pub fn slope(&self, d: &TDivisor) -> Result<Rational> {
        Ok(self.polarized_product(d)? / self.degree())
    }

    /// Log discrepancy `A_{(X,Delta)}(v)`: the function linear on each fan
    /// cone with value `1 - c_rho` at each primitive ray generator.
    pub fn log_discrepancy(&self, v: &QVec) -> Result<Rational> {
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.dim(),
            });
        }
        let a = self.log_discrepancy_divisor();
        let ci = self.fan.locate(v)?;
        let cone = &self.fan.max_cones()[ci];
        let values: Vec<Rational> = cone.iter().map(|&i| a.coeffs[i].clone()).collect();
        let m = self
            .fan
            .cone_linear_data(cone, &values)
            .ok_or_else(|| Error::NotQCartier("K_X + Delta".into()))?;
        Ok(m.dot(v))
    }

    /// `min_P <., v>`, the support value of the polarization at `v`.
    pub fn min_support(&self, v: &QVec) -> Rational {
        self.polytope
            .min_value(v)
            .expect("pair polytope is nonempty")
    }

    /// Decomposes `L + xi` in two ways through a nef basis, following the
    /// cone-decomposition construction, and reports the perturbation
    /// radius for the requested epsilon.
    pub fn cone_split(
        &self,
        xi: &TDivisor,
        nef_basis: &[TDivisor],
        epsilon: &Rational,
    ) -> Result<ConeSplit> {
        if *epsilon <= Rational::zero() {
            return Err(Error::OutOfRange("epsilon must be positive".into()));
        }
        for a in nef_basis {
            if !self.is_nef(a) {
                return Err(Error::NotNef("basis class".into()));
            }
        }
        let t = self.class_coordinates(&self.l_divisor(), nef_basis)?;
        if t.iter().any(|ti| *ti <= Rational::zero()) {
            return Err(Error::OutOfRange(
                "basis must express L with positive coefficients".into(),
            ));
        }
        let sum: Rational = t.iter().cloned().sum();
        if !sum.is_one() {
            return Err(Error::OutOfRange(
                "basis coefficients for L must sum to one".into(),
            ));
        }
        let xi_coords = self.class_coordinates(xi, nef_basis)?;
        let t0 = t.iter().cloned().min().unwrap();
        let delta: Rational = xi_coords.iter().map(|x| x.abs()).sum();
        if delta >= t0 {
            return Err(Error::OutOfRange(
                "xi norm must be smaller than the least basis coefficient".into(),
            ));
        }
        let q = &delta / &t0;
        let build = |sign_plus: bool| -> ConeSplitDecomposition {
            let scale = if sign_plus {
                Rational::one() - &q
            } else {
                Rational::one() + &q
            };
            let mut coords = Vec::with_capacity(t.len());
            let mut residual = TDivisor::zero(self.fan.rays().len());
            for ((ti, xi_i), a) in t.iter().zip(&xi_coords).zip(nef_basis) {
                let raw = if sign_plus {
                    &q * ti + xi_i
                } else {
                    &q * ti - xi_i
                };
                let coeff = raw / &scale;
                residual = residual.add(&a.scale(&coeff));
                coords.push(coeff);
            }
            let norm: Rational = coords.iter().map(|c| c.abs()).sum();
            let nef_certified = self.is_nef(&residual);
            ConeSplitDecomposition {
                scale,
                residual,
                residual_coords: coords,
                residual_norm: norm,
                nef_certified,
            }
        };
        let minus = build(false);
        let plus = build(true);
        let radius = epsilon * &t0 / (Rational::one() + &t0 + epsilon);
        Ok(ConeSplit {
            t,
            t0,
            xi_coords,
            xi_norm: delta,
            minus,
            plus,
            radius,
        })
    }

    /// Coordinates of a divisor class in the given basis, solving modulo
    /// linear equivalence (the character lattice image).
    fn class_coordinates(&self, d: &TDivisor, basis: &[TDivisor]) -> Result<Vec<Rational>> {
        let rays = self.fan.rays();
        let k = basis.len();
        let cols = k + self.n;
        let mut mat = QMatrix::zero(rays.len(), cols);
        for (r, ray) in rays.iter().enumerate() {
            for (c, a) in basis.iter().enumerate() {
                mat[(r, c)] = a.coeffs[r].clone();
            }
            for c in 0..self.n {
                mat[(r, k + c)] = ray.coord(c).clone();
            }
        }
        if mat.rank() != cols {
            return Err(Error::InvalidInput(
                "nef basis is not linearly independent as classes".into(),
            ));
        }
        let rhs: Vec<Rational> = d.coeffs.clone();
        let sol = crate::linalg::solve_any(&mat, &rhs).ok_or_else(|| {
            Error::InvalidInput("class does not lie in the span of the basis".into())
        })?;
        Ok(sol[..k].to_vec())
    }
}

/// One of the two decompositions `L + xi = scale * (L -/+ residual)`.
#[derive(Clone, Debug)]
pub struct ConeSplitDecomposition {
    pub scale: Rational,
    pub residual: TDivisor,
    pub residual_coords: Vec<Rational>,
    pub residual_norm: Rational,
    pub nef_certified: bool,
}

#[derive(Clone, Debug)]
pub struct ConeSplit {
    pub t: Vec<Rational>,
    pub t0: Rational,
    pub xi_coords: Vec<Rational>,
    pub xi_norm: Rational,
    /// `L + xi = minus.scale * (L - minus.residual)` with `minus.scale > 1`.
    pub minus: ConeSplitDecomposition,
    /// `L + xi = plus.scale * (L + plus.residual)` with `plus.scale < 1`.
    pub plus: ConeSplitDecomposition,
    pub radius: Rational,
}
