//! Valuative invariants of polarized toric pairs: volume curves, S-values,
//! beta invariants, the toric delta invariant, and the explicit threshold
//! formulas driving the perturbation statements.

use crate::error::{Error, Result};
use crate::piecewise::{PiecewisePolynomial, Poly};
use crate::rational::{rat_int, Rational};
use crate::toric::{PolarizedToricPair, TDivisor};
use crate::vector::QVec;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact volume curve `x -> vol(L - x F_v)`: the function
/// `n! * vol(slice(P, v, m(v) + x))` as a piecewise polynomial with
/// breakpoints at the vertex values of `v`, each piece recovered by exact
/// interpolation through n+1 exact slice volumes.
pub fn vol_curve(pair: &PolarizedToricPair, v: &QVec) -> Result<PiecewisePolynomial> {
    if v.is_zero() {
        return Err(Error::InvalidInput("valuation vector must be nonzero".into()));
    }
    let n = pair.dim();
    let p = pair.polytope();
    let m = pair.min_support(v);
    let mut breaks: Vec<Rational> = p.vertices().iter().map(|u| u.dot(v) - &m).collect();
    breaks.sort();
    breaks.dedup();
    debug_assert_eq!(breaks[0], Rational::zero());
    let nfac = crate::rational::factorial(n);
    let mut polys = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let step = (b - a) / rat_int(n as i64 + 2);
        let mut samples = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let x = a + &step * rat_int(j as i64 + 1);
            let c = &m + &x;
            let vol = p.slice(v, &c).volume();
            samples.push((x, &nfac * vol));
        }
        polys.push(Poly::interpolate(&samples));
    }
    let curve = PiecewisePolynomial::new(breaks, polys)?;
    // The value at zero is the full degree (L^n).
    debug_assert_eq!(curve.eval(&Rational::zero()), pair.degree());
    Ok(curve)
}

/// The barycenter closed form for the S-value:
/// `<barycenter(P), v> - min_P <., v>`.
pub fn s_value_closed_form(pair: &PolarizedToricPair, v: &QVec) -> Result<Rational> {
    let b = pair.polytope().barycenter()?;
    Ok(b.dot(v) - pair.min_support(v))
}

/// Expected volume loss `S(v) = (1/(L^n)) * integral of vol(L - x F_v)`.
/// Computes both the exact integral of the volume curve and the barycenter
/// closed form and insists they agree.
pub fn s_value(pair: &PolarizedToricPair, v: &QVec) -> Result<Rational> {
    let curve = vol_curve(pair, v)?;
    let integral = curve.total_integral() / pair.degree();
    let closed = s_value_closed_form(pair, v)?;
    if integral != closed {
        // Both routes are exact; disagreement means a kernel defect.
        panic!(
            "S-value routes disagree: integral {} vs closed form {}",
            crate::rational::format_rational(&integral),
            crate::rational::format_rational(&closed)
        );
    }
    Ok(closed)
}

/// One valuation row: log discrepancy, S-value, beta, and the ratio A/S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuativeRecord {
    pub v: QVec,
    pub a: Rational,
    pub s: Rational,
    pub beta_hat: Rational,
    pub ratio: Rational,
}

/// The record for a single toric valuation; errors when `A(v) <= 0`
/// (non-klt direction).
pub fn valuative_record(pair: &PolarizedToricPair, v: &QVec) -> Result<ValuativeRecord> {
    let a = pair.log_discrepancy(v)?;
    if a <= Rational::zero() {
        return Err(Error::NotKlt(format!("log discrepancy {a} at {v:?}")));
    }
    let s = s_value_closed_form(pair, v)?;
    let beta_hat = Rational::one() - &s / &a;
    let ratio = &a / &s;
    Ok(ValuativeRecord {
        v: v.clone(),
        a,
        s,
        beta_hat,
        ratio,
    })
}

/// `beta(v) = 1 - S(v)/A(v)`.
pub fn beta_hat(pair: &PolarizedToricPair, v: &QVec) -> Result<Rational> {
    Ok(valuative_record(pair, v)?.beta_hat)
}

/// Result of the toric delta computation: the minimum of `A/S` over the
/// fan's rays, where it is attained, and the per-ray table.
#[derive(Clone, Debug)]
pub struct DeltaResult {
    pub delta: Rational,
    pub argmin_ray_index: usize,
    pub argmin_ray: QVec,
    pub rays: Vec<ValuativeRecord>,
    /// True when the pair's polarization is not `-(K_X + Delta)`, i.e. the
    /// invariant is the natural extension of the anticanonical definition.
    pub polarization_extended: bool,
}

/// The toric delta invariant: both `A` and `S` are piecewise linear with
/// linearity cones exactly the fan's cones, so the infimum of the
/// degree-zero homogeneous ratio `A/S` over the fan support is attained at
/// a ray. Requires a klt pair.
pub fn delta_toric(pair: &PolarizedToricPair) -> Result<DeltaResult> {
    if !pair.is_klt() {
        return Err(Error::NotKlt("a boundary coefficient equals 1".into()));
    }
    let mut rays: Vec<ValuativeRecord> = Vec::new();
    let mut best: Option<usize> = None;
    for (i, ray) in pair.fan().rays().iter().enumerate() {
        let rec = valuative_record(pair, ray)?;
        match best {
            None => best = Some(i),
            Some(b) => {
                if rec.ratio < rays[b].ratio {
                    best = Some(i);
                }
            }
        }
        rays.push(rec);
    }
    let argmin = best.expect("complete fan has rays");
    Ok(DeltaResult {
        delta: rays[argmin].ratio.clone(),
        argmin_ray_index: argmin,
        argmin_ray: pair.fan().rays()[argmin].clone(),
        rays,
        polarization_extended: !pair.is_anticanonical_polarization(),
    })
}

/// Lower bound on the alpha invariant: `delta / (n+1)`.
pub fn alpha_lower_bound(delta: &Rational, n: usize) -> Result<Rational> {
    if *delta <= Rational::zero() {
        return Err(Error::OutOfRange("delta must be positive".into()));
    }
    Ok(delta / rat_int(n as i64 + 1))
}

/// Nef perturbation radius `eps0 = (delta - delta0) / (n delta + n + 1)`:
/// boundaries within this radius keep the delta invariant at least delta0.
pub fn fano_perturb_nef_radius(delta: &Rational, delta0: &Rational, n: usize) -> Result<Rational> {
    if *delta0 <= Rational::zero() || delta0 >= delta {
        return Err(Error::OutOfRange(
            "need 0 < delta0 < delta for the nef perturbation radius".into(),
        ));
    }
    Ok((delta - delta0) / (rat_int(n as i64) * delta + rat_int(n as i64 + 1)))
}

/// Certified rational lower approximation of the ample perturbation radius
/// `eps1 = min { delta/(n+1), 1 - (delta/delta1)^(1/(n+1)) }`.
#[derive(Clone, Debug)]
pub struct Epsilon1 {
    pub value: Rational,
    /// True when the returned value equals eps1 exactly (the rational
    /// branch won, or the root is rational).
    pub exact: bool,
    pub precision: Rational,
}

pub fn fano_perturb_upper(
    delta: &Rational,
    delta1: &Rational,
    n: usize,
    precision_bits: u32,
) -> Result<Epsilon1> {
    if delta >= delta1 || *delta <= Rational::zero() {
        return Err(Error::OutOfRange(
            "need 0 < delta < delta1 for the upper perturbation radius".into(),
        ));
    }
    let precision = Rational::new(BigInt::one(), BigInt::from(2u64).pow(precision_bits));
    let branch1 = delta / rat_int(n as i64 + 1);
    let r = delta / delta1; // in (0, 1)
    let e = (n + 1) as u32;
    let pow = |x: &Rational| -> Rational {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc *= x;
        }
        acc
    };
    // Bisect for the root of y^(n+1) = r on [r, 1] (root >= r since r < 1).
    let mut lo = r.clone();
    let mut hi = Rational::one();
    if pow(&lo) == r {
        // rational root straight away
        let branch2 = Rational::one() - lo;
        let value = branch1.clone().min(branch2);
        return Ok(Epsilon1 {
            value,
            exact: true,
            precision,
        });
    }
    loop {
        let mid = (&lo + &hi) / rat_int(2);
        let mp = pow(&mid);
        if mp == r {
            let branch2 = Rational::one() - mid;
            let value = branch1.clone().min(branch2);
            return Ok(Epsilon1 {
                value,
                exact: true,
                precision,
            });
        }
        if mp < r {
            lo = mid;
        } else {
            hi = mid;
        }
        // Bracket: lo < root < hi. Branch 2 lies in [1 - hi, 1 - lo].
        let b2_lower = Rational::one() - &hi;
        let b2_upper = Rational::one() - &lo;
        if branch1 <= b2_lower {
            return Ok(Epsilon1 {
                value: branch1,
                exact: true,
                precision,
            });
        }
        if &hi - &lo < precision {
            // Conservative: report the lower end of the bracket.
            let value = branch1.clone().min(b2_lower);
            let exact = value == branch1 && branch1 <= Rational::one() - &hi;
            return Ok(Epsilon1 {
                value,
                exact,
                precision,
            });
        }
        let _ = b2_upper;
    }
}

/// Polarization perturbation radius
/// `eps = (delta - 1) / ((n^2+n+1) delta + n^2+n-1)`.
pub fn fano_polarization_radius(delta: &Rational, n: usize) -> Result<Rational> {
    if *delta <= Rational::one() {
        return Err(Error::OutOfRange(
            "polarization radius needs delta > 1".into(),
        ));
    }
    let n = n as i64;
    Ok((delta - Rational::one()) / (rat_int(n * n + n + 1) * delta + rat_int(n * n + n - 1)))
}

/// Anticanonical perturbation radius with `delta0 = 1`: boundaries inside
/// keep the pair uniformly K-stable.
pub fn fano_boundary_radius(delta: &Rational, n: usize) -> Result<Rational> {
    fano_perturb_nef_radius(delta, &Rational::one(), n)
}

/// Verdict vocabulary for the stability criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Uniform,
    Semistable,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Uniform => "uniform",
            Verdict::Semistable => "semistable",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Numerical slope data for pairs supplied without toric geometry:
/// carries the intersection numbers and the positivity facts the caller
/// can certify about their variety.
#[derive(Clone, Debug)]
pub struct AbstractSlopeData {
    pub n: usize,
    /// `(L^n)`, must be positive.
    pub l_pow_n: Rational,
    /// `(L^{n-1} . (K_X + Delta))`.
    pub l_k_delta: Rational,
    /// `(L^{n-1} . N)` for a nef divisor N, when relevant.
    pub l_n: Option<Rational>,
    /// The slope-criterion class `(n^2/(n^2-1)) mu L - (K_X+Delta)` is ample.
    pub combination_ample: bool,
    /// ... or at least nef.
    pub combination_nef: bool,
    /// Caller-certified ampleness of `K_X + Delta` (adjoint-side checks).
    pub k_delta_ample: bool,
}

impl AbstractSlopeData {
    pub fn mu_k_delta(&self) -> Rational {
        &self.l_k_delta / &self.l_pow_n
    }
}

/// Outcome of the slope criterion.
#[derive(Clone, Debug)]
pub struct SlopeCriterionOutcome {
    pub mu: Rational,
    pub verdict: Verdict,
    pub reason: String,
}

/// Slope criterion on a toric pair: requires `mu_{K+Delta}(L) > 0` and
/// positivity of `(n^2/(n^2-1)) mu L - (K_X + Delta)`. On toric pairs with
/// toric boundary the slope is never positive, so this reports the reason.
pub fn w_criterion_toric(pair: &PolarizedToricPair) -> Result<SlopeCriterionOutcome> {
    let n = pair.dim();
    if n < 2 {
        return Err(Error::OutOfRange(
            "slope criterion needs dimension at least 2".into(),
        ));
    }
    let k_delta = pair.log_canonical_divisor();
    let mu = pair.slope(&k_delta)?;
    if mu <= Rational::zero() {
        return Ok(SlopeCriterionOutcome {
            mu,
            verdict: Verdict::Inconclusive,
            reason: "slope of K+Delta is not positive (K+Delta is anti-effective on toric pairs)"
                .into(),
        });
    }
    let n2 = rat_int((n * n) as i64);
    let factor = &n2 / (&n2 - Rational::one()) * &mu;
    let class = pair.l_divisor().scale(&factor).sub(&k_delta);
    let verdict = if pair.is_ample(&class) {
        Verdict::Uniform
    } else if pair.is_nef(&class) {
        Verdict::Semistable
    } else {
        Verdict::Inconclusive
    };
    Ok(SlopeCriterionOutcome {
        mu,
        verdict,
        reason: "positivity of the slope-criterion class".into(),
    })
}

/// Slope criterion from caller-supplied numerical data and flags.
pub fn w_criterion_abstract(data: &AbstractSlopeData) -> Result<SlopeCriterionOutcome> {
    if data.n < 2 {
        return Err(Error::OutOfRange(
            "slope criterion needs dimension at least 2".into(),
        ));
    }
    if data.l_pow_n <= Rational::zero() {
        return Err(Error::OutOfRange("(L^n) must be positive".into()));
    }
    let mu = data.mu_k_delta();
    if mu <= Rational::zero() {
        return Ok(SlopeCriterionOutcome {
            mu,
            verdict: Verdict::Inconclusive,
            reason: "slope of K+Delta is not positive".into(),
        });
    }
    let verdict = if data.combination_ample {
        Verdict::Uniform
    } else if data.combination_nef {
        Verdict::Semistable
    } else {
        Verdict::Inconclusive
    };
    Ok(SlopeCriterionOutcome {
        mu,
        verdict,
        reason: "caller-certified positivity of the slope-criterion class".into(),
    })
}

/// Outcome of the adjoint-polarization perturbation check: for `K+Delta`
/// ample and `M = (K+Delta) + N`, uniform K-stability of `M` follows from
/// the slope margin `1 - n^2 mu_N(M) > 0`.
#[derive(Clone, Debug)]
pub struct GtRadiusOutcome {
    pub mu_n: Rational,
    pub margin: Rational,
    pub verdict: Verdict,
}

pub fn gt_radius_check(data: &AbstractSlopeData) -> Result<GtRadiusOutcome> {
    if !data.k_delta_ample {
        return Err(Error::InvalidInput(
            "adjoint check needs caller-declared ampleness of K+Delta".into(),
        ));
    }
    let l_n = data
        .l_n
        .clone()
        .ok_or_else(|| Error::InvalidInput("missing (M^{n-1}.N)".into()))?;
    if data.l_pow_n <= Rational::zero() {
        return Err(Error::OutOfRange("(M^n) must be positive".into()));
    }
    let mu_n = &l_n / &data.l_pow_n;
    let n2 = rat_int((data.n * data.n) as i64);
    let margin = Rational::one() - n2 * &mu_n;
    let verdict = if margin > Rational::zero() {
        Verdict::Uniform
    } else {
        Verdict::Inconclusive
    };
    Ok(GtRadiusOutcome {
        mu_n,
        margin,
        verdict,
    })
}

/// Uniform-stability coefficient for a nef twist of an anticanonical
/// polarization: checks the radius hypothesis `eps L - N` nef, then
/// computes `delta1 - n mu_N(L-N)` whose sign settles the verdict for
/// `L - N`.
#[derive(Clone, Debug)]
pub struct FanoTwistOutcome {
    pub epsilon: Rational,
    pub delta1: Rational,
    pub mu: Rational,
    pub coefficient: Rational,
    pub verdict: Verdict,
}

pub fn fano_uniform_coefficient(
    pair: &PolarizedToricPair,
    n_div: &TDivisor,
    delta_param: &Rational,
) -> Result<FanoTwistOutcome> {
    if !pair.is_anticanonical_polarization() {
        return Err(Error::InvalidInput(
            "twist check needs the anticanonical polarization".into(),
        ));
    }
    let delta = delta_toric(pair)?.delta;
    if *delta_param <= Rational::one() || delta_param >= &delta {
        return Err(Error::OutOfRange(
            "need 1 < delta_param < delta".into(),
        ));
    }
    if !pair.is_nef(n_div) {
        return Err(Error::NotNef("twist divisor".into()));
    }
    let n = pair.dim();
    let epsilon = fano_perturb_nef_radius(&delta, delta_param, n)?;
    let radius_class = pair.l_divisor().scale(&epsilon).sub(n_div);
    if !pair.is_nef(&radius_class) {
        return Err(Error::NotNef("eps L - N".into()));
    }
    let l_minus_n = pair.l_divisor().sub(n_div);
    let mut divs: Vec<&TDivisor> = vec![&l_minus_n; n - 1];
    divs.push(n_div);
    let top = pair.intersection_number(&divs)?;
    let mut all = vec![&l_minus_n; n];
    let deg = pair.intersection_number(&all.drain(..).collect::<Vec<_>>())?;
    let mu = top / deg;
    Ok(fano_twist_from_parts(delta_param, n, &mu, epsilon))
}

/// Pure-arithmetic core of the twist check, usable with caller-supplied
/// slopes.
pub fn fano_twist_from_parts(
    delta_param: &Rational,
    n: usize,
    mu: &Rational,
    epsilon: Rational,
) -> FanoTwistOutcome {
    let delta1 = (delta_param - Rational::one()) / (rat_int(n as i64 + 1) * delta_param);
    let coefficient = &delta1 - rat_int(n as i64) * mu;
    let verdict = if coefficient > Rational::zero() {
        Verdict::Uniform
    } else if coefficient.is_zero() {
        Verdict::Semistable
    } else {
        Verdict::Inconclusive
    };
    FanoTwistOutcome {
        epsilon,
        delta1,
        mu: mu.clone(),
        coefficient,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::hull;
    use crate::rational::rat;

    fn plane_h() -> PolarizedToricPair {
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

    fn plane_anticanonical() -> PolarizedToricPair {
        let simplex = hull(&[
            QVec::from_ints(&[0, 0]),
            QVec::from_ints(&[1, 0]),
            QVec::from_ints(&[0, 1]),
        ])
        .unwrap();
        PolarizedToricPair::anticanonical(&simplex, &[]).unwrap()
    }

    fn blowup_anticanonical() -> PolarizedToricPair {
        PolarizedToricPair::from_vertices(
            &[
                QVec::from_ints(&[-1, 0]),
                QVec::from_ints(&[0, -1]),
                QVec::from_ints(&[2, -1]),
                QVec::from_ints(&[-1, 2]),
            ],
            &[],
        )
        .unwrap()
    }

    fn quadric_anticanonical() -> PolarizedToricPair {
        PolarizedToricPair::from_vertices(
            &[
                QVec::from_ints(&[-1, -1]),
                QVec::from_ints(&[1, -1]),
                QVec::from_ints(&[-1, 1]),
                QVec::from_ints(&[1, 1]),
            ],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn vol_curve_on_the_plane() {
        let pair = plane_h();
        let curve = vol_curve(&pair, &QVec::from_ints(&[1, 0])).unwrap();
        // (1-x)^2 on [0,1]
        assert_eq!(curve.eval(&Rational::zero()), rat_int(1));
        assert_eq!(curve.eval(&rat(1, 2)), rat(1, 4));
        assert_eq!(curve.eval(&rat_int(1)), rat_int(0));
        assert_eq!(curve.eval(&rat_int(5)), rat_int(0));
        assert_eq!(curve.total_integral(), rat(1, 3));
    }

    #[test]
    fn vol_curve_on_the_quadric() {
        let pair = PolarizedToricPair::from_vertices(
            &[
                QVec::from_ints(&[0, 0]),
                QVec::from_ints(&[1, 0]),
                QVec::from_ints(&[0, 1]),
                QVec::from_ints(&[1, 1]),
            ],
            &[],
        )
        .unwrap();
        let curve = vol_curve(&pair, &QVec::from_ints(&[1, 0])).unwrap();
        // 2(1-x) on [0,1]
        assert_eq!(curve.eval(&rat(1, 4)), rat(3, 2));
        assert_eq!(curve.eval(&Rational::zero()), rat_int(2));
        assert!(vol_curve(&pair, &QVec::zero(2)).is_err());
    }

    #[test]
    fn s_values_match_examples() {
        let pair = plane_h();
        assert_eq!(s_value(&pair, &QVec::from_ints(&[1, 0])).unwrap(), rat(1, 3));

        let fano = plane_anticanonical();
        assert_eq!(s_value(&fano, &QVec::from_ints(&[1, 0])).unwrap(), rat_int(1));

        let bl = blowup_anticanonical();
        assert_eq!(
            s_value(&bl, &QVec::from_ints(&[1, 1])).unwrap(),
            rat(7, 6)
        );
    }

    #[test]
    fn beta_values_match_examples() {
        let fano = plane_anticanonical();
        assert_eq!(beta_hat(&fano, &QVec::from_ints(&[1, 0])).unwrap(), rat_int(0));
        // Scaling invariance of beta.
        assert_eq!(beta_hat(&fano, &QVec::from_ints(&[2, 0])).unwrap(), rat_int(0));

        let bl = blowup_anticanonical();
        assert_eq!(
            beta_hat(&bl, &QVec::from_ints(&[1, 1])).unwrap(),
            rat(-1, 6)
        );
    }

    #[test]
    fn delta_of_the_plane_is_one() {
        let fano = plane_anticanonical();
        let d = delta_toric(&fano).unwrap();
        assert_eq!(d.delta, rat_int(1));
        assert!(!d.polarization_extended);
    }

    #[test]
    fn delta_of_the_quadric_is_one() {
        let d = delta_toric(&quadric_anticanonical()).unwrap();
        assert_eq!(d.delta, rat_int(1));
    }

    #[test]
    fn delta_of_the_blowup() {
        let d = delta_toric(&blowup_anticanonical()).unwrap();
        assert_eq!(d.delta, rat(6, 7));
        assert_eq!(d.argmin_ray, QVec::from_ints(&[1, 1]));
        // Ray table: ratios 12/13, 12/13, 6/5, 6/7 in some order.
        let mut ratios: Vec<Rational> = d.rays.iter().map(|r| r.ratio.clone()).collect();
        ratios.sort();
        assert_eq!(ratios, vec![rat(6, 7), rat(12, 13), rat(12, 13), rat(6, 5)]);
    }

    #[test]
    fn non_klt_pair_rejected() {
        let pair = PolarizedToricPair::from_vertices(
            &[
                QVec::from_ints(&[0, 0]),
                QVec::from_ints(&[1, 0]),
                QVec::from_ints(&[0, 1]),
            ],
            &[(QVec::from_ints(&[1, 0]), rat_int(1))],
        )
        .unwrap();
        assert!(matches!(delta_toric(&pair), Err(Error::NotKlt(_))));
    }

    #[test]
    fn threshold_formulas() {
        assert_eq!(alpha_lower_bound(&rat_int(1), 2).unwrap(), rat(1, 3));
        assert_eq!(alpha_lower_bound(&rat(6, 7), 2).unwrap(), rat(2, 7));
        assert_eq!(alpha_lower_bound(&rat_int(2), 3).unwrap(), rat(1, 2));

        assert_eq!(
            fano_perturb_nef_radius(&rat(6, 7), &rat(1, 2), 2).unwrap(),
            rat(5, 66)
        );
        assert_eq!(
            fano_perturb_nef_radius(&rat_int(2), &rat_int(1), 2).unwrap(),
            rat(1, 7)
        );
        assert!(fano_perturb_nef_radius(&rat_int(1), &rat_int(1), 2).is_err());

        assert_eq!(fano_polarization_radius(&rat_int(2), 2).unwrap(), rat(1, 19));
        assert_eq!(fano_polarization_radius(&rat_int(2), 3).unwrap(), rat(1, 37));
        assert!(fano_polarization_radius(&rat_int(1), 2).is_err());
    }

    #[test]
    fn upper_radius_bisection() {
        // n=1, delta=1, delta1=8: branch1 = 1/2 wins exactly.
        let e = fano_perturb_upper(&rat_int(1), &rat_int(8), 1, 32).unwrap();
        assert_eq!(e.value, rat(1, 2));
        assert!(e.exact);

        // n=2, delta=1, delta1=2: 1 - 2^{-1/3} irrational, approx 0.2062995.
        let e = fano_perturb_upper(&rat_int(1), &rat_int(2), 2, 32).unwrap();
        assert!(!e.exact);
        assert!(e.value > rat(20629, 100000));
        assert!(e.value < rat(20630, 100000));
        // Conservative direction: value^... check (1 - value)^3 >= 1/2.
        let y = Rational::one() - &e.value;
        assert!(&y * &y * &y >= rat(1, 2));

        // Rational root: delta/delta1 = 1/8 with n+1 = 3 gives y = 1/2.
        let e = fano_perturb_upper(&rat_int(1), &rat_int(8), 2, 32).unwrap();
        assert_eq!(e.value, rat(1, 3)); // min(1/3, 1/2) = branch1
        assert!(e.exact);

        assert!(fano_perturb_upper(&rat_int(2), &rat_int(2), 2, 32).is_err());
    }

    #[test]
    fn twist_coefficient_examples() {
        // delta_param = 2, n = 2: delta1 = 1/6.
        let out = fano_twist_from_parts(&rat_int(2), 2, &rat(1, 20), Rational::zero());
        assert_eq!(out.delta1, rat(1, 6));
        assert_eq!(out.coefficient, rat(1, 15));
        assert_eq!(out.verdict, Verdict::Uniform);

        let out = fano_twist_from_parts(&rat_int(2), 2, &rat(1, 6), Rational::zero());
        assert_eq!(out.coefficient, rat(-1, 6));
        assert_eq!(out.verdict, Verdict::Inconclusive);

        let out = fano_twist_from_parts(&rat_int(2), 2, &Rational::zero(), Rational::zero());
        assert_eq!(out.coefficient, rat(1, 6));
        assert_eq!(out.verdict, Verdict::Uniform);
    }

    #[test]
    fn slope_criterion_on_toric_pairs_is_inconclusive() {
        let out = w_criterion_toric(&plane_h()).unwrap();
        assert!(out.mu <= Rational::zero());
        assert_eq!(out.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn slope_criterion_abstract_rule_table() {
        let mk = |mu_num: i64, ample: bool, nef: bool| AbstractSlopeData {
            n: 2,
            l_pow_n: rat_int(4),
            l_k_delta: rat_int(mu_num),
            l_n: None,
            combination_ample: ample,
            combination_nef: nef,
            k_delta_ample: false,
        };
        assert_eq!(
            w_criterion_abstract(&mk(3, true, true)).unwrap().verdict,
            Verdict::Uniform
        );
        assert_eq!(
            w_criterion_abstract(&mk(3, false, true)).unwrap().verdict,
            Verdict::Semistable
        );
        assert_eq!(
            w_criterion_abstract(&mk(0, true, true)).unwrap().verdict,
            Verdict::Inconclusive
        );
        assert!(w_criterion_abstract(&mk(3, true, true)).is_ok());
        let mut curve = mk(3, true, true);
        curve.n = 1;
        assert!(w_criterion_abstract(&curve).is_err());
    }

    #[test]
    fn adjoint_radius_rule_table() {
        let mk = |l_n: Option<Rational>| AbstractSlopeData {
            n: 2,
            l_pow_n: rat_int(1),
            l_k_delta: rat_int(1),
            l_n,
            combination_ample: false,
            combination_nef: false,
            k_delta_ample: true,
        };
        let out = gt_radius_check(&mk(Some(Rational::zero()))).unwrap();
        assert_eq!(out.margin, rat_int(1));
        assert_eq!(out.verdict, Verdict::Uniform);

        let out = gt_radius_check(&mk(Some(rat(1, 5)))).unwrap();
        assert_eq!(out.margin, rat(1, 5));
        assert_eq!(out.verdict, Verdict::Uniform);

        let out = gt_radius_check(&mk(Some(rat(1, 4)))).unwrap();
        assert_eq!(out.margin, rat_int(0));
        assert_eq!(out.verdict, Verdict::Inconclusive);

        assert!(gt_radius_check(&mk(None)).is_err());
    }
}
