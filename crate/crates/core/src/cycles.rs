//! Periodic cycles: detection from orbit tails, verification, and the
//! second-iterate certificate that {0, ∞} is the only non-fixed 2-cycle.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{DynError, Result};
use crate::ext::{cdiv, chordal_distance, ExtComplex, C64, ZERO};
use crate::fixed_points::fixed_point_cubic;
use crate::orbit::MAX_PERIOD;
use crate::plane_map::{eval_derivative, eval_map, singular_points, MapParams, Reduction};
use crate::poly::Poly;

pub const DEFAULT_MATCH_TOL: f64 = 1e-8;
pub const DEFAULT_N_PROBE: usize = 1024;
pub const DEFAULT_N_TRANSIENT: usize = 10_000;
/// Largest chordal distance tolerated when removing the fixed points from
/// the roots of the second-iterate polynomial.
pub const DEFLATION_TOL: f64 = 1e-6;
/// Cycles passing this close to a pole or ∞ are not Newton-refined.
const REFINE_GUARD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    /// One full cycle starting at the lexicographically smallest point.
    pub points: Vec<ExtComplex>,
    pub prime_period: usize,
    /// max over i of d(f(c_i), c_{i+1}) in the chordal metric.
    pub residual: f64,
    /// Product of f′ over the cycle; for the {0, ∞} cycle the value in the
    /// local charts, αδ/(βγ).
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_c64")]
    pub multiplier: Option<C64>,
}

impl CycleRecord {
    /// Same cycle as a set, up to `tol` per point.
    pub fn same_cycle(&self, other: &CycleRecord, tol: f64) -> bool {
        self.prime_period == other.prime_period
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| chordal_distance(a, b) < tol)
    }
}

mod opt_c64 {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(|z| Repr { re: z.re, im: z.im }).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<C64>, D::Error> {
        Ok(Option::<Repr>::deserialize(d)?.map(|r| C64::new(r.re, r.im)))
    }
}

fn step(params: &MapParams, z: ExtComplex) -> Option<ExtComplex> {
    eval_map(params, z).ok()
}

/// Largest chordal closure error of a candidate cycle.
fn closure_residual(params: &MapParams, points: &[ExtComplex]) -> Result<(usize, f64)> {
    let n = points.len();
    let mut worst = (0, 0.0);
    for i in 0..n {
        let image = eval_map(params, points[i])?;
        let d = chordal_distance(&image, &points[(i + 1) % n]);
        if !(d <= worst.1) {
            worst = (i, d);
        }
    }
    Ok(worst)
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn canonical_rotation(points: &[ExtComplex]) -> Vec<ExtComplex> {
    let start = (0..points.len())
        .min_by(|&a, &b| match points[a].lex_cmp(&points[b]) {
            Ordering::Equal => a.cmp(&b),
            o => o,
        })
        .unwrap_or(0);
    points[start..].iter().chain(&points[..start]).copied().collect()
}

fn cycle_multiplier(params: &MapParams, points: &[ExtComplex]) -> Option<C64> {
    let is_trivial = points.len() == 2
        && points.iter().any(|z| z.is_zero())
        && points.iter().any(|z| z.is_infinite());
    if is_trivial {
        return zero_infinity_multiplier(params).ok();
    }
    let mut m = C64::new(1.0, 0.0);
    for z in points {
        if z.is_zero() || z.is_infinite() {
            return None;
        }
        m *= eval_derivative(params, *z).ok()?;
    }
    Some(m)
}

/// Recomputes residual and prime period of a listed cycle.
///
/// The prime period is the smallest divisor d of the list length for which
/// the list repeats with shift d. Fails with `NotACycle` at the worst index
/// when the closure residual reaches `verify_tol`.
pub fn verify_cycle(params: &MapParams, points: &[ExtComplex], verify_tol: f64) -> Result<CycleRecord> {
    if points.is_empty() {
        return Err(DynError::EmptyCycle);
    }
    let (index, residual) = closure_residual(params, points)?;
    if !(residual < verify_tol) {
        return Err(DynError::NotACycle { index, residual });
    }
    let n = points.len();
    let prime = divisors(n)
        .into_iter()
        .find(|&d| (0..n).all(|i| chordal_distance(&points[i], &points[(i + d) % n]) < verify_tol))
        .unwrap_or(n);
    let pts = canonical_rotation(&points[..prime]);
    let residual = closure_residual(params, &pts)?.1;
    Ok(CycleRecord {
        multiplier: cycle_multiplier(params, &pts),
        prime_period: prime,
        residual,
        points: pts,
    })
}

/// Newton's method on `f^p(z) − z = 0` for one cycle point.
fn refine(params: &MapParams, start: C64, period: usize) -> Option<C64> {
    let poles: Vec<C64> = singular_points(params)
        .ok()?
        .into_iter()
        .filter_map(|z| z.finite())
        .collect();
    let mut z = start;
    for _ in 0..50 {
        let mut w = ExtComplex::Finite(z);
        let mut dz = C64::new(1.0, 0.0);
        for _ in 0..period {
            let c = w.finite()?;
            if c.norm() > 1.0 / REFINE_GUARD || poles.iter().any(|p| (c - p).norm() < REFINE_GUARD) {
                return None;
            }
            dz *= eval_derivative(params, w).ok()?;
            w = eval_map(params, w).ok()?;
        }
        let g = w.finite()? - z;
        let s = cdiv(g, dz - 1.0)?;
        z -= s;
        if s.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    z.re.is_finite().then_some(z)
}

fn orbit_of(params: &MapParams, start: ExtComplex, len: usize) -> Option<Vec<ExtComplex>> {
    let mut pts = Vec::with_capacity(len);
    let mut z = start;
    for _ in 0..len {
        pts.push(z);
        z = step(params, z)?;
    }
    Some(pts)
}

/// Finds an attracting cycle reached from `z0`.
///
/// After `n_transient` steps the next `n_probe` iterates are searched for the
/// smallest p ≤ 256 with `d(z_n, z_{n+p}) < match_tol` sustained over
/// `min(3p, n_probe − p)` steps at the end of the window. Finite cycles away
/// from the poles are Newton-refined on the p-fold closure before
/// verification.
pub fn detect_cycle(
    params: &MapParams,
    z0: ExtComplex,
    n_transient: usize,
    n_probe: usize,
    match_tol: f64,
) -> Option<CycleRecord> {
    detect_cycle_up_to(params, z0, n_transient, n_probe, match_tol, MAX_PERIOD)
}

/// [`detect_cycle`] with a smaller period cap.
pub fn detect_cycle_up_to(
    params: &MapParams,
    z0: ExtComplex,
    n_transient: usize,
    n_probe: usize,
    match_tol: f64,
    max_period: usize,
) -> Option<CycleRecord> {
    let mut z = z0;
    for _ in 0..n_transient {
        z = step(params, z)?;
    }
    let probe = orbit_of(params, z, n_probe)?;
    let max_p = max_period.min(MAX_PERIOD).min(n_probe / 2);
    let period = (1..=max_p).find(|&p| {
        let span = (3 * p).min(n_probe - p);
        (n_probe - p - span..n_probe - p).all(|n| chordal_distance(&probe[n], &probe[n + p]) < match_tol)
    })?;
    let raw = probe[n_probe - period..].to_vec();
    let start = canonical_rotation(&raw)[0];
    let mut best = verify_cycle(params, &raw, match_tol).ok();
    if let Some(c) = start.finite() {
        if let Some(r) = refine(params, c, period) {
            if let Some(pts) = orbit_of(params, ExtComplex::Finite(r), period) {
                if let Ok(rec) = verify_cycle(params, &pts, match_tol) {
                    if best.as_ref().is_none_or(|b| rec.residual <= b.residual) {
                        best = Some(rec);
                    }
                }
            }
        }
    }
    best
}

/// Points fixed by f∘f other than the fixed points of f.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SecondIterateSet {
    /// Remaining roots with their residual d(f(f(r)), r).
    Roots(Vec<(ExtComplex, f64)>),
    /// f∘f is the identity (the map reduces to k/z).
    IdenticallyPeriodic,
}

/// Numerator of f(f(z)) − z after clearing denominators:
/// `D(αN + βD) − zN(γN + δD)` with `N = αz + β`, `D = γz² + δz`.
pub fn second_iterate_polynomial(params: &MapParams) -> (Poly, f64) {
    let (a, b, g, d) = (params.alpha, params.beta, params.gamma, params.delta);
    let zero = C64::new(0.0, 0.0);
    let num = Poly::new(vec![b, a]);
    let den = Poly::new(vec![zero, d, g]);
    let lhs = &den * &(&num.scaled(a) + &den.scaled(b));
    let z_num = &Poly::new(vec![zero, C64::new(1.0, 0.0)]) * &num;
    let rhs = &z_num * &(&num.scaled(g) + &den.scaled(d));
    let magnitude = lhs
        .coeffs
        .iter()
        .chain(&rhs.coeffs)
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    (&lhs - &rhs, magnitude)
}

/// Roots of f∘f = id on the extended plane with the three fixed points
/// removed. For a map that does not reduce this is {0, ∞}.
///
/// The roots of the numerator polynomial are completed with ∞ up to the
/// nominal count of five, the three roots of the fixed-point cubic are
/// removed by nearest chordal matching, and what remains is returned.
pub fn second_iterate_fixed_set(params: &MapParams) -> Result<SecondIterateSet> {
    if let Reduction::Reciprocal { .. } = params.reduction() {
        return Ok(SecondIterateSet::IdenticallyPeriodic);
    }
    let (q, magnitude) = second_iterate_polynomial(params);
    // coefficients at rounding level of the two products are cancellation noise
    let Some(degree) = q.degree_above(1e-13 * magnitude) else {
        return Ok(SecondIterateSet::IdenticallyPeriodic);
    };
    let q = q.truncated(degree);
    let mut roots: Vec<ExtComplex> = q.roots().into_iter().map(ExtComplex::Finite).collect();
    roots.extend(std::iter::repeat_n(ExtComplex::Infinity, 5usize.saturating_sub(degree)));

    let fixed: Vec<ExtComplex> = fixed_point_cubic(params)
        .roots()
        .into_iter()
        .map(ExtComplex::Finite)
        .collect();
    let mut worst: f64 = 0.0;
    for f in &fixed {
        let (k, d) = roots
            .iter()
            .enumerate()
            .map(|(k, r)| (k, chordal_distance(r, f)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .ok_or(DynError::DeflationFailure { residual: f64::INFINITY })?;
        worst = worst.max(d);
        roots.remove(k);
    }
    if worst > DEFLATION_TOL {
        return Err(DynError::DeflationFailure { residual: worst });
    }
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        let r2 = eval_map(params, eval_map(params, r)?)?;
        out.push((r, chordal_distance(&r2, &r)));
    }
    out.sort_by(|x, y| x.0.lex_cmp(&y.0));
    Ok(SecondIterateSet::Roots(out))
}

/// Multiplier αδ/(βγ) of the {0, ∞} cycle from the local expansions
/// f(z) ≈ β/(δz) near 0 and f(w) ≈ α/(γw) near ∞.
pub fn zero_infinity_multiplier(params: &MapParams) -> Result<C64> {
    let den = params.beta * params.gamma;
    cdiv(params.alpha * params.delta, den).ok_or(DynError::DegenerateMap)
}

/// Whether {0, ∞} is a cycle of the map.
pub fn has_trivial_cycle(params: &MapParams) -> bool {
    eval_map(params, ZERO).is_ok_and(|w| w.is_infinite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_points::fixed_points;
    use crate::presets::*;

    fn fin(re: f64, im: f64) -> ExtComplex {
        ExtComplex::Finite(C64::new(re, im))
    }

    #[test]
    fn trivial_pair_verifies() {
        let p = slow_convergence();
        let rec = verify_cycle(&p, &[ExtComplex::Infinity, ZERO], 1e-12).unwrap();
        assert_eq!(rec.prime_period, 2);
        assert_eq!(rec.residual, 0.0);
        assert_eq!(rec.points, vec![ZERO, ExtComplex::Infinity]);
        assert_eq!(rec.multiplier, Some(zero_infinity_multiplier(&p).unwrap()));
    }

    #[test]
    fn repeated_fixed_point_has_period_one() {
        let p = fast_convergence();
        let z = ExtComplex::Finite(fixed_points(&p).unwrap().records[0].z_bar);
        let rec = verify_cycle(&p, &[z, z, z], 1e-9).unwrap();
        assert_eq!(rec.prime_period, 1);
        assert_eq!(rec.points.len(), 1);
    }

    #[test]
    fn non_cycle_reports_index() {
        let p = fast_convergence();
        let err = verify_cycle(&p, &[fin(0.1, 0.1), fin(0.2, 0.2)], 1e-6).unwrap_err();
        assert!(matches!(err, DynError::NotACycle { .. }));
        assert_eq!(verify_cycle(&p, &[], 1e-6).unwrap_err(), DynError::EmptyCycle);
    }

    #[test]
    fn detects_fixed_point_as_one_cycle() {
        let p = fast_convergence();
        let z = fixed_points(&p).unwrap().records[2].z_bar;
        let rec = detect_cycle(&p, ExtComplex::Finite(z), 0, 64, 1e-8).unwrap();
        assert_eq!(rec.prime_period, 1);
    }

    #[test]
    fn five_cycle_from_published_seed() {
        let p = period_5();
        let seed = fin(PERIOD_5_POINTS[0].0, PERIOD_5_POINTS[0].1);
        let rec = detect_cycle(&p, seed, DEFAULT_N_TRANSIENT, DEFAULT_N_PROBE, DEFAULT_MATCH_TOL).unwrap();
        assert_eq!(rec.prime_period, 5);
        assert!(rec.residual < 1e-12);
        assert!(rec.multiplier.unwrap().norm() < 1.0);
    }

    #[test]
    fn canonical_rotation_from_every_cycle_point() {
        let p = period_8();
        let first = detect_cycle(&p, fin(0.1245073, 0.0238456), 5000, 1024, 1e-8).unwrap();
        for z in &first.points {
            let again = detect_cycle(&p, *z, 0, 1024, 1e-8).unwrap();
            assert!(again.same_cycle(&first, 1e-12));
        }
    }

    #[test]
    fn second_iterate_of_generic_map() {
        let SecondIterateSet::Roots(rest) = second_iterate_fixed_set(&slow_convergence()).unwrap() else {
            panic!("generic map is not an involution");
        };
        let pts: Vec<ExtComplex> = rest.iter().map(|r| r.0).collect();
        assert_eq!(pts, vec![ZERO, ExtComplex::Infinity]);
        assert!(rest.iter().all(|r| r.1 == 0.0));
    }

    #[test]
    fn second_iterate_of_involution() {
        let a = C64::new(0.3, 0.2);
        let g = C64::new(0.5, 0.9);
        let p = MapParams::new(a, a, g, g).unwrap();
        assert_eq!(second_iterate_fixed_set(&p).unwrap(), SecondIterateSet::IdenticallyPeriodic);
    }

    #[test]
    fn second_iterate_polynomial_factors_through_the_cubic() {
        // Q = (βγ − αδ) · z · C(z)
        let p = period_8();
        let (q, _) = second_iterate_polynomial(&p);
        let c = fixed_point_cubic(&p);
        let k = p.beta * p.gamma - p.alpha * p.delta;
        let expect = &Poly::new(vec![C64::new(0.0, 0.0), k]) * &c;
        for (x, y) in q.coeffs.iter().zip(&expect.coeffs) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_infinity_multiplier_values() {
        let one = C64::new(1.0, 0.0);
        let p = MapParams::new(one, one * 10.0, one, one).unwrap();
        assert!((zero_infinity_multiplier(&p).unwrap() - 0.1).norm() < 1e-15);
        assert!(has_trivial_cycle(&p));
        let q = MapParams::new(one, C64::new(0.0, 0.0), one, one).unwrap();
        assert!(!has_trivial_cycle(&q));
    }
}
