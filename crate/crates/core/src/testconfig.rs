//! Toric test configurations from convex piecewise-linear functions.
//!
//! A configuration is encoded by the region under the ceiling:
//! `Q = { (u, t) : u in P, 0 <= t <= M - f(u) }` for a convex rational
//! piecewise-linear `f` on `P` with `min f = 0` and a ceiling `M > max f`.
//! The facets of `Q` split into the vertical facets over the facets of `P`,
//! one bottom facet (the trivially embedded copy of the original variety),
//! and one top facet per linearity cell of `f` (the central-fiber
//! components, with multiplicities read off the primitive normals).

use crate::error::{Error, Result};
use crate::invariants::{delta_toric, Verdict};
use crate::piecewise::{AffineForm, PLFunction};
use crate::polytope::{hull, Halfspace, LatticePolytope};
use crate::rational::{denominator_lcm, factorial, rat_int, Rational};
use crate::toric::{PolarizedToricPair, TDivisor};
use crate::vector::QVec;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// What a facet of the configuration polytope `Q` is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FacetKind {
    /// Over facet `ray` of the base polytope.
    Vertical { ray: usize },
    /// The fiber at the trivial pole.
    Bottom,
    /// A central-fiber component over linearity cell `piece` of `f`.
    Top { piece: usize },
}

#[derive(Clone, Debug)]
pub struct FacetInfo {
    pub kind: FacetKind,
    /// |last coordinate of the primitive inward normal| for horizontal
    /// facets; 1 for vertical facets.
    pub multiplicity: i64,
    pub lattice_volume: Rational,
}

/// Per-facet classification of `Q`, aligned with `q.facets()`.
#[derive(Clone, Debug)]
pub struct FacetClassification {
    pub facets: Vec<FacetInfo>,
}

impl FacetClassification {
    pub fn vertical_count(&self) -> usize {
        self.facets
            .iter()
            .filter(|f| matches!(f.kind, FacetKind::Vertical { .. }))
            .count()
    }

    pub fn top_count(&self) -> usize {
        self.facets
            .iter()
            .filter(|f| matches!(f.kind, FacetKind::Top { .. }))
            .count()
    }
}

/// A toric test configuration of `(X, L)`.
#[derive(Clone, Debug)]
pub struct ToricTestConfig {
    base: PolarizedToricPair,
    f: PLFunction,
    ceiling: Rational,
    q: LatticePolytope,
    classification: FacetClassification,
    /// True when the input function had nonzero minimum and was shifted.
    pub normalized: bool,
}

impl ToricTestConfig {
    pub fn base(&self) -> &PolarizedToricPair {
        &self.base
    }

    pub fn function(&self) -> &PLFunction {
        &self.f
    }

    pub fn ceiling(&self) -> &Rational {
        &self.ceiling
    }

    pub fn total_polytope(&self) -> &LatticePolytope {
        &self.q
    }

    pub fn classification(&self) -> &FacetClassification {
        &self.classification
    }
}

/// Builds the configuration, normalizing `min f = 0` (recorded in
/// `normalized`) and certifying the facet classification. Rejects ceilings
/// that do not strictly dominate the function.
pub fn build(
    base: &PolarizedToricPair,
    f: &PLFunction,
    ceiling: &Rational,
) -> Result<ToricTestConfig> {
    if f.domain().vertices() != base.polytope().vertices() {
        return Err(Error::InvalidInput(
            "function domain differs from the moment polytope".into(),
        ));
    }
    let min = f.min_on_domain();
    let (f, ceiling, normalized) = if min.is_zero() {
        (f.clone(), ceiling.clone(), false)
    } else {
        (f.shifted(&-&min), ceiling - &min, true)
    };
    let max = f.max_on_domain();
    if ceiling <= max {
        return Err(Error::CeilingTooSmall(format!(
            "ceiling {} vs max {}",
            crate::rational::format_rational(&ceiling),
            crate::rational::format_rational(&max)
        )));
    }
    let n = base.dim();
    // Vertices of Q lie over the cell-complex vertices.
    let mut points = Vec::new();
    for u in f.cell_vertices() {
        let val = &ceiling - &f.eval(&u);
        points.push(u.extended(Rational::zero()));
        points.push(u.extended(val));
    }
    let q = hull(&points)?;
    if !q.is_full_dim() {
        return Err(Error::Degenerate("configuration polytope".into()));
    }
    let classification = classify_facets(base, &f, &ceiling, &q)?;
    Ok(ToricTestConfig {
        base: base.clone(),
        f,
        ceiling,
        q,
        classification,
        normalized,
    })
}

fn classify_facets(
    base: &PolarizedToricPair,
    f: &PLFunction,
    ceiling: &Rational,
    q: &LatticePolytope,
) -> Result<FacetClassification> {
    let n = base.dim();
    // Predicted primitive top normals, one per piece.
    let mut top_by_normal: Vec<(Halfspace, usize)> = Vec::new();
    for (i, piece) in f.pieces().iter().enumerate() {
        // t <= M - (<a,u> + b)  <=>  <(u,t), (-a,-1)> >= b - M
        let normal = (-&piece.linear).extended(-Rational::one());
        let hs = Halfspace::new(normal, &piece.constant - ceiling).primitivized();
        top_by_normal.push((hs, i));
    }
    let mut infos = Vec::with_capacity(q.facets().len());
    let mut seen_rays = vec![false; base.fan().rays().len()];
    let mut seen_pieces = vec![false; f.pieces().len()];
    let mut bottom_count = 0usize;
    for (fi, h) in q.facets().iter().enumerate() {
        let last = h.normal.coord(n).clone();
        let latvol = q.facet_lattice_volume(fi)?;
        if last.is_zero() {
            let base_normal = h.normal.truncated();
            let ray = base
                .fan()
                .ray_index(&base_normal)
                .ok_or_else(|| Error::InvalidInput("vertical facet over unknown ray".into()))?;
            if seen_rays[ray] {
                return Err(Error::InvalidInput("duplicate vertical facet".into()));
            }
            seen_rays[ray] = true;
            infos.push(FacetInfo {
                kind: FacetKind::Vertical { ray },
                multiplicity: 1,
                lattice_volume: latvol,
            });
        } else if last > Rational::zero() {
            // Must be the bottom facet t >= 0.
            let expected = QVec::zero(n).extended(Rational::one());
            if h.normal != expected || !h.offset.is_zero() {
                return Err(Error::InvalidInput(
                    "unexpected upward facet in configuration polytope".into(),
                ));
            }
            bottom_count += 1;
            infos.push(FacetInfo {
                kind: FacetKind::Bottom,
                multiplicity: 1,
                lattice_volume: latvol,
            });
        } else {
            let m = (-&last)
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::OutOfRange("multiplicity too large".into()))?;
            debug_assert!((-&last).is_integer());
            let hit = top_by_normal
                .iter()
                .find(|(hs, _)| hs.normal == h.normal && hs.offset == h.offset)
                .ok_or_else(|| Error::InvalidInput("top facet matches no piece".into()))?;
            if seen_pieces[hit.1] {
                return Err(Error::InvalidInput("duplicate top facet".into()));
            }
            seen_pieces[hit.1] = true;
            infos.push(FacetInfo {
                kind: FacetKind::Top { piece: hit.1 },
                multiplicity: m,
                lattice_volume: latvol,
            });
        }
    }
    if bottom_count != 1 {
        return Err(Error::InvalidInput("expected exactly one bottom facet".into()));
    }
    if !seen_rays.iter().all(|&s| s) {
        return Err(Error::CeilingTooSmall(
            "a vertical facet collapsed; the ceiling must strictly dominate the function".into(),
        ));
    }
    if !seen_pieces.iter().all(|&s| s) {
        return Err(Error::InvalidInput("a linearity cell produced no top facet".into()));
    }
    Ok(FacetClassification { facets: infos })
}

/// `J^NA` through the intersection formula: with `Ptilde = P x {0}`,
/// `(n+1)! V(Q, Ptilde, ..., Ptilde) / (L^n) - (n+1)! vol(Q) / ((n+1) (L^n))`.
pub fn jna(tc: &ToricTestConfig) -> Result<Rational> {
    let n = tc.base.dim();
    let p_lift = hull(
        &tc.base
            .polytope()
            .vertices()
            .iter()
            .map(|u| u.extended(Rational::zero()))
            .collect::<Vec<_>>(),
    )?;
    let mut bodies: Vec<&LatticePolytope> = vec![&tc.q];
    for _ in 0..n {
        bodies.push(&p_lift);
    }
    let mixed = crate::mixed::mixed_volume(&bodies)?;
    let deg = tc.base.degree();
    let np1fac = factorial(n + 1);
    let first = &np1fac * mixed / &deg;
    let second = np1fac * tc.q.volume() / (rat_int(n as i64 + 1) * &deg);
    Ok(first - second)
}

/// Independent cross-check: the maximum minus the mean of the weight
/// potential `M - f` over the base polytope, which equals
/// `mean f - min f` for the normalized function.
pub fn jna_weight_crosscheck(tc: &ToricTestConfig) -> Rational {
    let weight_max = tc.ceiling.clone() - tc.f.min_on_domain();
    let weight_mean = tc.ceiling.clone() - tc.f.mean();
    weight_max - weight_mean
}

/// Log Donaldson-Futaki invariant via the facet formula with the pair's own
/// boundary coefficients.
pub fn df(tc: &ToricTestConfig) -> Result<Rational> {
    df_with_boundary(tc, tc.base.boundary())
}

/// The facet formula with arbitrary rational boundary coefficients
/// (indexed by fan ray):
/// `(1/(L^n)) [ n! (sum_vertical (c_rho - 1) latvol + sum_top (m - 1) latvol)
///   - (n/(n+1)) mu_{K+Delta'}(L) (n+1)! vol(Q) ]`.
pub fn df_with_boundary(tc: &ToricTestConfig, coeffs: &[Rational]) -> Result<Rational> {
    let n = tc.base.dim();
    if coeffs.len() != tc.base.fan().rays().len() {
        return Err(Error::DimensionMismatch {
            expected: tc.base.fan().rays().len(),
            got: coeffs.len(),
        });
    }
    let mut facet_sum = Rational::zero();
    for info in &tc.classification.facets {
        match &info.kind {
            FacetKind::Vertical { ray } => {
                facet_sum += (&coeffs[*ray] - Rational::one()) * &info.lattice_volume;
            }
            FacetKind::Top { .. } => {
                facet_sum += rat_int(info.multiplicity - 1) * &info.lattice_volume;
            }
            FacetKind::Bottom => {}
        }
    }
    let deg = tc.base.degree();
    // mu_{K + Delta'}(L) with the supplied coefficients.
    let k_delta = TDivisor {
        coeffs: coeffs.iter().map(|c| c - Rational::one()).collect(),
    };
    let mu = tc.base.polarized_product(&k_delta)? / &deg;
    let n_rat = rat_int(n as i64);
    let first = factorial(n) * facet_sum;
    let second = &n_rat / (&n_rat + Rational::one()) * mu * factorial(n + 1) * tc.q.volume();
    Ok((first - second) / deg)
}

/// Trivial iff the ample model is a product, i.e. the function is constant.
pub fn is_trivial(tc: &ToricTestConfig) -> bool {
    tc.f.is_constant()
}

/// Both sides of the boundary-perturbation inequality
/// `n mu_N(L) J >= DF_{Delta+N} - DF_Delta` for an effective nef `N`.
#[derive(Clone, Debug)]
pub struct PerturbCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

pub fn perturb_check(tc: &ToricTestConfig, n_div: &TDivisor) -> Result<PerturbCheck> {
    if !n_div.is_effective() {
        return Err(Error::NotEffective("perturbing divisor".into()));
    }
    if !tc.base.is_nef(n_div) {
        return Err(Error::NotNef("perturbing divisor".into()));
    }
    let n = tc.base.dim();
    let mu_n = tc.base.slope(n_div)?;
    let j = jna(tc)?;
    let lhs = rat_int(n as i64) * mu_n * j;
    let shifted: Vec<Rational> = tc
        .base
        .boundary()
        .iter()
        .zip(&n_div.coeffs)
        .map(|(c, d)| c + d)
        .collect();
    let rhs = df_with_boundary(tc, &shifted)? - df(tc)?;
    let holds = lhs >= rhs;
    Ok(PerturbCheck { lhs, rhs, holds })
}

/// The deformation-to-divisor configuration for a toric valuation `v`:
/// `f(u) = max(0, c - (<u,v> - m(v)))` with ceiling `c + 1`.
pub fn destabilizer_from_ray(
    base: &PolarizedToricPair,
    v: &QVec,
    c: &Rational,
) -> Result<ToricTestConfig> {
    if *c <= Rational::zero() {
        return Err(Error::OutOfRange("deformation parameter must be positive".into()));
    }
    let m = base.min_support(v);
    let zero = AffineForm::new(QVec::zero(base.dim()), Rational::zero());
    let ramp = AffineForm::new(-v, c + &m);
    let f = PLFunction::upper_envelope(base.polytope(), &[zero, ramp])?;
    build(base, &f, &(c + Rational::one()))
}

/// Scans deformation parameters over a grid of fractions of the width of
/// `P` along `v`, reporting each Donaldson-Futaki value and the first
/// strictly negative one.
pub fn destabilizer_scan(
    base: &PolarizedToricPair,
    v: &QVec,
    steps: usize,
) -> Result<Vec<(Rational, Rational)>> {
    let m = base.min_support(v);
    let width = base
        .polytope()
        .max_value(v)
        .expect("pair polytope nonempty")
        - m;
    let mut out = Vec::with_capacity(steps);
    for j in 1..=steps {
        let c = &width * rat_int(j as i64) / rat_int(steps as i64);
        let tc = destabilizer_from_ray(base, v, &c)?;
        out.push((c, df(&tc)?));
    }
    Ok(out)
}

/// Coercivity bound from the delta invariant: for an anticanonical
/// polarization with `delta >= 1`, `DF >= (eps/(n+1)) J` with
/// `eps = 1 - 1/delta`. Reports NotApplicable when `delta < 1`.
#[derive(Clone, Debug)]
pub struct TechnicalBound {
    pub applicable: bool,
    pub epsilon: Rational,
    pub df: Rational,
    pub jna: Rational,
    pub bound: Rational,
    pub holds: bool,
}

pub fn technical_bound_check(tc: &ToricTestConfig) -> Result<TechnicalBound> {
    if !tc.base.is_anticanonical_polarization() {
        return Err(Error::InvalidInput(
            "coercivity bound needs the anticanonical polarization".into(),
        ));
    }
    let delta = delta_toric(&tc.base)?.delta;
    let df_val = df(tc)?;
    let j_val = jna(tc)?;
    if delta < Rational::one() {
        return Ok(TechnicalBound {
            applicable: false,
            epsilon: Rational::zero(),
            df: df_val,
            jna: j_val,
            bound: Rational::zero(),
            holds: true,
        });
    }
    let epsilon = Rational::one() - delta.recip();
    let n = tc.base.dim();
    let bound = &epsilon / rat_int(n as i64 + 1) * &j_val;
    let holds = df_val >= bound;
    Ok(TechnicalBound {
        applicable: true,
        epsilon,
        df: df_val,
        jna: j_val,
        bound,
        holds,
    })
}

/// Intersection-negativity evaluation on the total space:
/// `(M_1 ... M_{n-1} . D^2)` for `D` supported on the central fiber and
/// each `M_i` nef. The value must be nonpositive.
pub fn negativity_check(
    tc: &ToricTestConfig,
    top_coeffs: &[Rational],
    nef_list: &[Vec<Rational>],
) -> Result<Rational> {
    let n = tc.base.dim();
    if nef_list.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            got: nef_list.len(),
        });
    }
    let top_facets: Vec<usize> = tc
        .classification
        .facets
        .iter()
        .enumerate()
        .filter(|(_, info)| matches!(info.kind, FacetKind::Top { .. }))
        .map(|(i, _)| i)
        .collect();
    if top_coeffs.len() != top_facets.len() {
        return Err(Error::DimensionMismatch {
            expected: top_facets.len(),
            got: top_coeffs.len(),
        });
    }
    let total = PolarizedToricPair::polarized_variety(tc.q.clone())?;
    let rays = total.fan().rays().len();
    // Facet order of Q equals ray order of its normal fan.
    let mut d = TDivisor::zero(rays);
    for (coeff, &fi) in top_coeffs.iter().zip(&top_facets) {
        d.coeffs[fi] = coeff.clone();
    }
    let ms: Vec<TDivisor> = nef_list
        .iter()
        .map(|c| {
            if c.len() != rays {
                return Err(Error::DimensionMismatch {
                    expected: rays,
                    got: c.len(),
                });
            }
            let div = TDivisor { coeffs: c.clone() };
            if !total.is_nef(&div) {
                return Err(Error::NotNef("intersection factor".into()));
            }
            Ok(div)
        })
        .collect::<Result<_>>()?;
    let mut divs: Vec<&TDivisor> = ms.iter().collect();
    divs.push(&d);
    divs.push(&d);
    total.intersection_number(&divs)
}

/// The polarization of the total space as a divisor on it.
pub fn total_polarization(tc: &ToricTestConfig) -> Vec<Rational> {
    tc.q.facets().iter().map(|h| -h.offset.clone()).collect()
}

/// The fiber class of the total space (the bottom facet divisor).
pub fn fiber_class(tc: &ToricTestConfig) -> Vec<Rational> {
    tc.classification
        .facets
        .iter()
        .map(|info| {
            if matches!(info.kind, FacetKind::Bottom) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// The whole central fiber as top-facet coefficients (multiplicities).
pub fn central_fiber_coeffs(tc: &ToricTestConfig) -> Vec<Rational> {
    tc.classification
        .facets
        .iter()
        .filter(|info| matches!(info.kind, FacetKind::Top { .. }))
        .map(|info| rat_int(info.multiplicity))
        .collect()
}

/// Weight-asymptotics estimate of the Donaldson-Futaki invariant for pairs
/// with empty boundary. Samples `w_k / (k N_k)` at ceiling-compatible `k`,
/// fits `a0 + a1/k + a2/k^2` through sliding 3-point windows, and returns
/// `-2 a1` from the last window with the change from the previous window as
/// the residual.
#[derive(Clone, Debug)]
pub struct WeightOracle {
    pub estimate: Rational,
    pub residual: Rational,
    pub samples: Vec<(u64, Rational)>,
}

pub fn df_weight_oracle(tc: &ToricTestConfig, k_max: u64) -> Result<WeightOracle> {
    if tc.base.boundary().iter().any(|c| !c.is_zero()) {
        return Err(Error::InvalidInput(
            "weight oracle is implemented for empty boundary only".into(),
        ));
    }
    // k must clear every denominator of Q's vertex data.
    let step = denominator_lcm(
        tc.q
            .vertices()
            .iter()
            .flat_map(|v| v.coords().iter()),
    )
    .to_u64()
    .ok_or_else(|| Error::OutOfRange("denominator too large".into()))?;
    let ks: Vec<u64> = (1..)
        .map(|j| j * step)
        .take_while(|k| *k <= k_max)
        .collect();
    if ks.len() < 4 {
        return Err(Error::FitTooShort(format!(
            "need 4 admissible sample points at step {step}, k_max {k_max} gives {}",
            ks.len()
        )));
    }
    let ks = &ks[ks.len() - 4..];
    // Integerized weight: k(M - f(u/k)) = (kM*den - max_i(<a_i*den, u> + k b_i*den)) / den.
    let mut piece_den = denominator_lcm(
        tc.f
            .pieces()
            .iter()
            .flat_map(|p| p.linear.coords().iter().chain(std::iter::once(&p.constant)))
            .chain(std::iter::once(&tc.ceiling)),
    );
    if piece_den.is_zero() {
        piece_den = BigInt::one();
    }
    let den_i = piece_den
        .to_i128()
        .ok_or_else(|| Error::OutOfRange("denominator too large".into()))?;
    let denq = Rational::from_integer(piece_den);
    let pieces_int: Vec<(Vec<i128>, i128)> = tc
        .f
        .pieces()
        .iter()
        .map(|p| {
            let a: Vec<i128> = p
                .linear
                .coords()
                .iter()
                .map(|c| {
                    (c * &denq)
                        .to_integer()
                        .to_i128()
                        .ok_or_else(|| Error::OutOfRange("coefficient too large".into()))
                })
                .collect::<Result<_>>()?;
            let b = (&p.constant * &denq)
                .to_integer()
                .to_i128()
                .ok_or_else(|| Error::OutOfRange("coefficient too large".into()))?;
            Ok((a, b))
        })
        .collect::<Result<_>>()?;
    let ceiling_int = (&tc.ceiling * &denq)
        .to_integer()
        .to_i128()
        .ok_or_else(|| Error::OutOfRange("ceiling too large".into()))?;

    let mut samples = Vec::with_capacity(ks.len());
    for &k in ks {
        let mut n_k: i128 = 0;
        let mut w_k: i128 = 0;
        tc.base.polytope().for_each_lattice_point(k, |u| {
            n_k += 1;
            // max_i (<a_i, u> + k b_i), scaled by den
            let mut best: Option<i128> = None;
            for (a, b) in &pieces_int {
                let mut val: i128 = *b * k as i128;
                for (ai, ui) in a.iter().zip(u) {
                    val += ai * ui;
                }
                best = Some(match best {
                    None => val,
                    Some(x) => x.max(val),
                });
            }
            let top = ceiling_int * k as i128 - best.unwrap();
            // floor(top / den): den > 0, top >= 0 inside P
            w_k += top.div_euclid(den_i);
        })?;
        let y = Rational::new(BigInt::from(w_k), BigInt::from(k) * BigInt::from(n_k));
        samples.push((k, y));
    }
    // Sliding 3-point fits of a0 + a1/k + a2/k^2: windows (0,1,2), (1,2,3).
    let a1_of = |w: &[(u64, Rational)]| -> Rational {
        let mut mat = crate::linalg::QMatrix::zero(3, 3);
        let mut rhs = Vec::with_capacity(3);
        for (r, (k, y)) in w.iter().enumerate() {
            let inv = Rational::new(BigInt::one(), BigInt::from(*k));
            mat[(r, 0)] = Rational::one();
            mat[(r, 1)] = inv.clone();
            mat[(r, 2)] = &inv * &inv;
            rhs.push(y.clone());
        }
        let sol = crate::linalg::solve_square(&mat, &rhs).expect("distinct sample points");
        sol[1].clone()
    };
    let a1_prev = a1_of(&samples[0..3]);
    let a1_last = a1_of(&samples[1..4]);
    let estimate = rat_int(-2) * &a1_last;
    let residual = (rat_int(-2) * a1_last - rat_int(-2) * a1_prev).abs();
    Ok(WeightOracle {
        estimate,
        residual,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn line_pair() -> PolarizedToricPair {
        PolarizedToricPair::from_vertices(
            &[QVec::from_ints(&[0]), QVec::from_ints(&[1])],
            &[],
        )
        .unwrap()
    }

    fn plane_pair() -> PolarizedToricPair {
        PolarizedToricPair::from_vertices(
            &[
                QVec::from_ints(&[0, 0]),
                QVec::from_ints(&[1, 0]),
                QVec::from_ints(&[0, 1]),
            ],
            &[],
        )
        .unwrap()
    }

    fn linear_f(pair: &PolarizedToricPair, slope: &[i64], constant: Rational) -> PLFunction {
        PLFunction::upper_envelope(
            pair.polytope(),
            &[AffineForm::new(QVec::from_ints(slope), constant)],
        )
        .unwrap()
    }

    fn hinge_f(pair: &PolarizedToricPair) -> PLFunction {
        // max(0, 2u - 1) on [0, 1]
        PLFunction::upper_envelope(
            pair.polytope(),
            &[
                AffineForm::new(QVec::from_ints(&[0]), rat_int(0)),
                AffineForm::new(QVec::from_ints(&[2]), rat_int(-1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn trivial_configuration_is_a_box() {
        let pair = line_pair();
        let f = PLFunction::constant(pair.polytope(), Rational::zero()).unwrap();
        let tc = build(&pair, &f, &rat_int(1)).unwrap();
        assert_eq!(tc.total_polytope().volume(), rat_int(1));
        assert!(is_trivial(&tc));
        assert_eq!(df(&tc).unwrap(), rat_int(0));
        assert_eq!(jna(&tc).unwrap(), rat_int(0));
        assert_eq!(jna_weight_crosscheck(&tc), rat_int(0));
    }

    #[test]
    fn product_configuration_from_linear_function() {
        let pair = line_pair();
        let f = linear_f(&pair, &[1], rat_int(0));
        let tc = build(&pair, &f, &rat_int(2)).unwrap();
        let verts: Vec<QVec> = vec![
            QVec::from_ints(&[0, 0]),
            QVec::from_ints(&[0, 2]),
            QVec::from_ints(&[1, 0]),
            QVec::from_ints(&[1, 1]),
        ];
        let expected = hull(&verts).unwrap();
        assert_eq!(tc.total_polytope().vertices(), expected.vertices());
        assert!(!is_trivial(&tc));
        assert_eq!(jna(&tc).unwrap(), rat(1, 2));
        assert_eq!(jna_weight_crosscheck(&tc), rat(1, 2));
        assert_eq!(df(&tc).unwrap(), rat_int(0));
        // Ceiling invariance.
        let tc3 = build(&pair, &f, &rat_int(3)).unwrap();
        assert_eq!(jna(&tc3).unwrap(), rat(1, 2));
        assert_eq!(df(&tc3).unwrap(), rat_int(0));
    }

    #[test]
    fn ceiling_must_strictly_dominate() {
        let pair = line_pair();
        let f = linear_f(&pair, &[1], rat_int(0));
        assert!(matches!(
            build(&pair, &f, &rat_int(1)),
            Err(Error::CeilingTooSmall(_))
        ));
        // Constant shift is auto-normalized and flagged.
        let g = linear_f(&pair, &[1], rat_int(5));
        let tc = build(&pair, &g, &rat_int(7)).unwrap();
        assert!(tc.normalized);
        assert_eq!(df(&tc).unwrap(), rat_int(0));
        assert_eq!(jna(&tc).unwrap(), rat(1, 2));
    }

    #[test]
    fn hinge_on_the_line_has_positive_futaki() {
        let pair = line_pair();
        let tc = build(&pair, &hinge_f(&pair), &rat_int(2)).unwrap();
        assert_eq!(jna(&tc).unwrap(), rat(1, 4));
        assert_eq!(jna_weight_crosscheck(&tc), rat(1, 4));
        assert_eq!(df(&tc).unwrap(), rat(1, 2));
        // Ceiling invariance again.
        let tc3 = build(&pair, &hinge_f(&pair), &rat_int(3)).unwrap();
        assert_eq!(df(&tc3).unwrap(), rat(1, 2));
        assert_eq!(jna(&tc3).unwrap(), rat(1, 4));
    }

    #[test]
    fn classification_of_hinge_facets() {
        let pair = line_pair();
        let tc = build(&pair, &hinge_f(&pair), &rat_int(2)).unwrap();
        let cls = tc.classification();
        assert_eq!(cls.vertical_count(), 2);
        assert_eq!(cls.top_count(), 2);
        let bottoms = cls
            .facets
            .iter()
            .filter(|f| matches!(f.kind, FacetKind::Bottom))
            .count();
        assert_eq!(bottoms, 1);
    }

    #[test]
    fn fractional_slope_gives_multiplicity_two() {
        let pair = line_pair();
        let f = PLFunction::upper_envelope(
            pair.polytope(),
            &[AffineForm::new(QVec::new(vec![rat(1, 2)]), rat_int(0))],
        )
        .unwrap();
        let tc = build(&pair, &f, &rat_int(1)).unwrap();
        let tops: Vec<&FacetInfo> = tc
            .classification()
            .facets
            .iter()
            .filter(|i| matches!(i.kind, FacetKind::Top { .. }))
            .collect();
        assert_eq!(tops.len(), 1);
        assert_eq!(tops[0].multiplicity, 2);
        assert_eq!(tops[0].lattice_volume, rat(1, 2));
        assert_eq!(df(&tc).unwrap(), rat(1, 2));
    }

    #[test]
    fn affine_function_on_the_plane_has_zero_futaki() {
        let pair = plane_pair();
        let f = linear_f(&pair, &[1, 0], rat_int(0));
        let tc = build(&pair, &f, &rat_int(2)).unwrap();
        assert_eq!(df(&tc).unwrap(), rat_int(0));
        assert_eq!(jna(&tc).unwrap(), rat(1, 3));
        assert_eq!(jna_weight_crosscheck(&tc), rat(1, 3));
    }

    #[test]
    fn destabilizer_scan_on_the_blowup_finds_negative() {
        let bl = PolarizedToricPair::from_vertices(
            &[
                QVec::from_ints(&[-1, 0]),
                QVec::from_ints(&[0, -1]),
                QVec::from_ints(&[2, -1]),
                QVec::from_ints(&[-1, 2]),
            ],
            &[],
        )
        .unwrap();
        let scans = destabilizer_scan(&bl, &QVec::from_ints(&[1, 1]), 10).unwrap();
        let min_df = scans.iter().map(|(_, d)| d.clone()).min().unwrap();
        assert!(min_df < Rational::zero());
        // The full-width deformation value.
        let last = &scans.last().unwrap().1;
        assert_eq!(*last, rat(-1, 6));
    }

    #[test]
    fn destabilizer_scan_on_the_plane_stays_nonnegative() {
        let simplex = hull(&[
            QVec::from_ints(&[0, 0]),
            QVec::from_ints(&[1, 0]),
            QVec::from_ints(&[0, 1]),
        ])
        .unwrap();
        let plane = PolarizedToricPair::anticanonical(&simplex, &[]).unwrap();
        for ray in plane.fan().rays().to_vec() {
            let scans = destabilizer_scan(&plane, &ray, 8).unwrap();
            for (_, d) in scans {
                assert!(d >= Rational::zero());
            }
        }
    }

    #[test]
    fn perturbation_inequality_on_the_plane() {
        let pair = plane_pair();
        let f = PLFunction::upper_envelope(
            pair.polytope(),
            &[
                AffineForm::new(QVec::from_ints(&[0, 0]), rat_int(0)),
                AffineForm::new(QVec::from_ints(&[2, 0]), rat_int(-1)),
            ],
        )
        .unwrap();
        let tc = build(&pair, &f, &rat_int(2)).unwrap();
        let e1 = pair.fan().ray_index(&QVec::from_ints(&[1, 0])).unwrap();
        let mut n_div = TDivisor::zero(3);
        n_div.coeffs[e1] = rat(1, 2);
        let out = perturb_check(&tc, &n_div).unwrap();
        assert!(out.holds);
        // Zero divisor gives equality 0 >= 0.
        let out = perturb_check(&tc, &TDivisor::zero(3)).unwrap();
        assert_eq!(out.lhs, rat_int(0));
        assert_eq!(out.rhs, rat_int(0));
        assert!(out.holds);
    }

    #[test]
    fn technical_bound_on_plane_and_blowup() {
        let simplex = hull(&[
            QVec::from_ints(&[0, 0]),
            QVec::from_ints(&[1, 0]),
            QVec::from_ints(&[0, 1]),
        ])
        .unwrap();
        let plane = PolarizedToricPair::anticanonical(&simplex, &[]).unwrap();
        let f = PLFunction::upper_envelope(
            plane.polytope(),
            &[
                AffineForm::new(QVec::from_ints(&[0, 0]), rat_int(0)),
                AffineForm::new(QVec::from_ints(&[1, 1]), rat_int(0)),
            ],
        )
        .unwrap();
        let tc = build(&plane, &f, &rat_int(4)).unwrap();
        let out = technical_bound_check(&tc).unwrap();
        assert!(out.applicable);
        assert_eq!(out.epsilon, rat_int(0));
        assert!(out.holds);
        assert!(out.df >= rat_int(0));

        let bl = PolarizedToricPair::from_vertices(
            &[
                QVec::from_ints(&[-1, 0]),
                QVec::from_ints(&[0, -1]),
                QVec::from_ints(&[2, -1]),
                QVec::from_ints(&[-1, 2]),
            ],
            &[],
        )
        .unwrap();
        let g = PLFunction::constant(bl.polytope(), Rational::zero()).unwrap();
        let tcb = build(&bl, &g, &rat_int(1)).unwrap();
        let out = technical_bound_check(&tcb).unwrap();
        assert!(!out.applicable);
    }

    #[test]
    fn negativity_of_fiber_supported_squares() {
        let pair = line_pair();
        let tc = build(&pair, &hinge_f(&pair), &rat_int(2)).unwrap();
        // n = 1: no nef factors needed; D^2 alone.
        let zero = vec![rat_int(0); tc.classification().top_count()];
        assert_eq!(negativity_check(&tc, &zero, &[]).unwrap(), rat_int(0));
        // Whole central fiber squares to zero.
        let fiber = central_fiber_coeffs(&tc);
        assert_eq!(negativity_check(&tc, &fiber, &[]).unwrap(), rat_int(0));
        // A single component squares negatively.
        let mut single = vec![rat_int(0); tc.classification().top_count()];
        single[0] = rat_int(1);
        let val = negativity_check(&tc, &single, &[]).unwrap();
        assert!(val <= rat_int(0));
        assert!(val < rat_int(0));
    }

    #[test]
    fn negativity_with_polarization_factors_on_surface() {
        let pair = plane_pair();
        let f = PLFunction::upper_envelope(
            pair.polytope(),
            &[
                AffineForm::new(QVec::from_ints(&[0, 0]), rat_int(0)),
                AffineForm::new(QVec::from_ints(&[1, 1]), rat_int(-1)),
            ],
        )
        .unwrap();
        let tc = build(&pair, &f, &rat_int(2)).unwrap();
        let fiber = central_fiber_coeffs(&tc);
        let l = total_polarization(&tc);
        assert_eq!(negativity_check(&tc, &fiber, &[l.clone()]).unwrap(), rat_int(0));
        let mut single = vec![rat_int(0); tc.classification().top_count()];
        single[0] = rat_int(1);
        let val = negativity_check(&tc, &single, &[l]).unwrap();
        assert!(val <= rat_int(0));
    }

    #[test]
    fn weight_oracle_matches_facet_formula() {
        let pair = line_pair();
        // Trivial: estimate 0 with zero residual.
        let f0 = PLFunction::constant(pair.polytope(), Rational::zero()).unwrap();
        let tc0 = build(&pair, &f0, &rat_int(1)).unwrap();
        let o = df_weight_oracle(&tc0, 40).unwrap();
        assert_eq!(o.estimate, rat_int(0));
        assert_eq!(o.residual, rat_int(0));

        // Product configuration: estimate 0.
        let f1 = linear_f(&pair, &[1], rat_int(0));
        let tc1 = build(&pair, &f1, &rat_int(2)).unwrap();
        let o = df_weight_oracle(&tc1, 40).unwrap();
        assert_eq!(o.estimate, rat_int(0));

        // Hinge: estimate close to 1/2 within a few residuals.
        let tc2 = build(&pair, &hinge_f(&pair), &rat_int(2)).unwrap();
        let o = df_weight_oracle(&tc2, 40).unwrap();
        let err = (o.estimate.clone() - rat(1, 2)).abs();
        assert!(err <= rat_int(8) * &o.residual || err.is_zero());
        assert!(o.estimate > Rational::zero());

        // Fractional slope: multiplicity-two central fiber, estimate 1/2.
        let fr = PLFunction::upper_envelope(
            pair.polytope(),
            &[AffineForm::new(QVec::new(vec![rat(1, 2)]), rat_int(0))],
        )
        .unwrap();
        let tcf = build(&pair, &fr, &rat_int(1)).unwrap();
        let o = df_weight_oracle(&tcf, 40).unwrap();
        let err = (o.estimate.clone() - rat(1, 2)).abs();
        assert!(err <= rat_int(8) * &o.residual || err.is_zero());

        // Too few admissible points.
        assert!(matches!(
            df_weight_oracle(&tc2, 3),
            Err(Error::FitTooShort(_))
        ));
    }
}
