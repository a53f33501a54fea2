//! Fixed points: roots of `γz³ + δz² − αz − β = 0` with their multipliers.

use serde::{Deserialize, Serialize};

use crate::error::{DynError, Result};
use crate::ext::{c64_serde, cdiv, ExtComplex, C64};
use crate::plane_map::{eval_derivative, eval_map, MapParams, Reduction, SpecialCaseTag};
use crate::poly::{cubic_discriminant, Poly};

pub const DEFAULT_CLASS_TOL: f64 = 1e-9;

/// Monic-cubic discriminant magnitude below which roots are near-multiple.
pub const CONDITIONING_THRESHOLD: f64 = 1e-12;

/// Residual above which a candidate is rejected as not a fixed point.
pub const FIXED_POINT_REJECT: f64 = 1e-6;

/// Roots closer than this (relative) are counted as one multiple root.
const MULTIPLICITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stability {
    /// |f′| < 1: locally asymptotically stable.
    Sink,
    /// |f′| > 1: unstable.
    Source,
    /// |f′| = 1 within the class tolerance.
    NonHyperbolic,
}

impl Stability {
    pub fn classify(multiplier_abs: f64, class_tol: f64) -> Self {
        if multiplier_abs < 1.0 - class_tol {
            Stability::Sink
        } else if multiplier_abs > 1.0 + class_tol {
            Stability::Source
        } else {
            Stability::NonHyperbolic
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    /// 1-based position in the sorted root list; 0 for a standalone classification.
    pub index: usize,
    #[serde(with = "c64_serde")]
    pub z_bar: C64,
    pub multiplier_abs: f64,
    pub stability: Stability,
    /// |f(z̄) − z̄|
    pub residual: f64,
    pub class_tol: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FixedPointWarning {
    /// Monic discriminant below the conditioning threshold.
    Conditioning { discriminant_abs: f64 },
    /// A root of the cubic that is a removable point of the map, not a fixed point.
    RemovableRootDropped {
        #[serde(with = "c64_serde")]
        z: C64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSet {
    pub records: Vec<FixedPointRecord>,
    pub discriminant_abs: f64,
    pub warnings: Vec<FixedPointWarning>,
}

impl FixedPointSet {
    pub fn points(&self) -> Vec<C64> {
        self.records.iter().map(|r| r.z_bar).collect()
    }
}

/// The fixed-point cubic `γz³ + δz² − αz − β` in ascending coefficient order.
pub fn fixed_point_cubic(params: &MapParams) -> Poly {
    Poly::new(vec![-params.beta, -params.alpha, params.delta, params.gamma])
}

fn residual(params: &MapParams, z: C64) -> f64 {
    match eval_map(params, ExtComplex::Finite(z)) {
        Ok(ExtComplex::Finite(w)) => (w - z).norm(),
        _ => f64::INFINITY,
    }
}

/// Solves the fixed-point cubic, polishes each root with Newton steps on the
/// cubic and attaches multiplier and stability. Records are sorted by
/// (re, im). Roots of the cubic that are removable points of a reduced map
/// are dropped and reported as warnings.
pub fn fixed_points(params: &MapParams) -> Result<FixedPointSet> {
    fixed_points_with_tol(params, DEFAULT_CLASS_TOL)
}

pub fn fixed_points_with_tol(params: &MapParams, class_tol: f64) -> Result<FixedPointSet> {
    if params.gamma == C64::new(0.0, 0.0) {
        return Err(DynError::DegenerateMap);
    }
    let cubic = fixed_point_cubic(params);
    let g = params.gamma;
    let monic = |c: C64| cdiv(c, g).expect("gamma nonzero");
    let disc = cubic_discriminant(
        C64::new(1.0, 0.0),
        monic(params.delta),
        monic(-params.alpha),
        monic(-params.beta),
    )
    .norm();

    let mut warnings = Vec::new();
    if disc < CONDITIONING_THRESHOLD {
        warnings.push(FixedPointWarning::Conditioning { discriminant_abs: disc });
    }

    let mut roots: Vec<C64> = match params.reduction() {
        // f(z) = k/z: the cubic's third root is the cancelled pole
        Reduction::Reciprocal { k } => {
            warnings.push(FixedPointWarning::RemovableRootDropped {
                z: cdiv(-params.delta, g).expect("gamma nonzero"),
            });
            vec![k.sqrt(), -k.sqrt()]
        }
        _ => cubic.roots().into_iter().map(|z| cubic.polish(z, 2)).collect(),
    };
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let mut records = Vec::with_capacity(3);
    for &z in &roots {
        let removable = match params.reduction() {
            Reduction::ZeroBeta => z == C64::new(0.0, 0.0),
            Reduction::Reciprocal { .. } | Reduction::None => false,
        };
        if removable {
            warnings.push(FixedPointWarning::RemovableRootDropped { z });
            continue;
        }
        let multiplicity = roots
            .iter()
            .filter(|w| (*w - z).norm() <= MULTIPLICITY_TOL * (1.0 + z.norm()))
            .count();
        let mut rec = record(params, z, class_tol)?;
        rec.index = records.len() + 1;
        rec.multiplicity = multiplicity;
        records.push(rec);
    }
    Ok(FixedPointSet {
        records,
        discriminant_abs: disc,
        warnings,
    })
}

fn record(params: &MapParams, z: C64, class_tol: f64) -> Result<FixedPointRecord> {
    let multiplier_abs = eval_derivative(params, ExtComplex::Finite(z))?.norm();
    Ok(FixedPointRecord {
        index: 0,
        z_bar: z,
        multiplier_abs,
        stability: Stability::classify(multiplier_abs, class_tol),
        residual: residual(params, z),
        class_tol,
        multiplicity: 1,
    })
}

/// Classifies a given fixed point by |f′(z̄)|.
pub fn classify_stability(params: &MapParams, z_bar: C64, class_tol: f64) -> Result<FixedPointRecord> {
    let res = residual(params, z_bar);
    if !(res < FIXED_POINT_REJECT * (1.0 + z_bar.norm())) {
        return Err(DynError::NotAFixedPoint { residual: res });
    }
    record(params, z_bar, class_tol)
}

/// Closed-form fixed points for the special families.
///
/// * Case A (α=β, γ=δ): `±√(α/γ)`, multiplier modulus 1.
/// * Case C (γ=α, δ=β): `±1`, multiplier modulus 1.
/// * Case D (γ=β, δ=α): `1` with |f′(1)| = |2β/(α+β)|, and the pair
///   `(−(α+β) ± √(α²+2αβ−3β²)) / (2β)` with |f′| = |2 + α/β|.
///
/// Multipliers here come from the closed forms, not from the derivative.
pub fn special_case_fixed_points(
    params: &MapParams,
    tag: SpecialCaseTag,
    class_tol: f64,
) -> Result<Vec<FixedPointRecord>> {
    let (a, b, g) = (params.alpha, params.beta, params.gamma);
    let one = C64::new(1.0, 0.0);
    let div = |n: C64, m: C64| cdiv(n, m).ok_or(DynError::DegenerateMap);
    let pairs: Vec<(C64, f64)> = match tag {
        SpecialCaseTag::General => return Err(DynError::WrongTag("General")),
        SpecialCaseTag::CaseB => return Err(DynError::WrongTag("CaseB")),
        SpecialCaseTag::CaseA => {
            let r = div(a, g)?.sqrt();
            vec![(r, 1.0), (-r, 1.0)]
        }
        SpecialCaseTag::CaseC => vec![(one, 1.0), (-one, 1.0)],
        SpecialCaseTag::CaseD => {
            let m1 = div(b * 2.0, a + b)?.norm();
            let root = (a * a + a * b * 2.0 - b * b * 3.0).sqrt();
            let two_b = b * 2.0;
            let pair_mult = (div(a, b)? + 2.0).norm();
            vec![
                (one, m1),
                (div(-(a + b) - root, two_b)?, pair_mult),
                (div(-(a + b) + root, two_b)?, pair_mult),
            ]
        }
    };
    let mut out: Vec<FixedPointRecord> = pairs
        .into_iter()
        .map(|(z, m)| FixedPointRecord {
            index: 0,
            z_bar: z,
            multiplier_abs: m,
            stability: Stability::classify(m, class_tol),
            residual: residual(params, z),
            class_tol,
            multiplicity: 1,
        })
        .collect();
    out.sort_by(|x, y| x.z_bar.re.total_cmp(&y.z_bar.re).then(x.z_bar.im.total_cmp(&y.z_bar.im)));
    for (k, r) in out.iter_mut().enumerate() {
        r.index = k + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::*;
    use crate::test_util::match_sets;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn published_fixed_points_source_case() {
        let set = fixed_points(&slow_convergence()).unwrap();
        let want = [c(-0.708428, 0.171918), c(1.1079, -0.305049), c(-1.13054, -0.00168788)];
        assert!(match_sets(&set.points(), &want) < 1e-4);
        let r = set
            .records
            .iter()
            .find(|r| (r.z_bar - want[0]).norm() < 1e-4)
            .unwrap();
        assert_eq!(r.stability, Stability::Source);
        assert!((r.multiplier_abs - 3.51012).abs() < 1e-3);
    }

    #[test]
    fn published_fixed_points_sink_case() {
        let set = fixed_points(&fast_convergence()).unwrap();
        let want = [c(0.515402, -0.0307232), c(-0.484732, 0.0782783), c(-0.848703, -0.00872243)];
        assert!(match_sets(&set.points(), &want) < 1e-4);
        let r = classify_stability(&fast_convergence(), set.records[2].z_bar, DEFAULT_CLASS_TOL).unwrap();
        assert_eq!(r.stability, Stability::Sink);
        assert!((r.multiplier_abs - 0.991066).abs() < 1e-3);
    }

    #[test]
    fn cube_roots_of_unity() {
        let set = fixed_points(&inverse_square()).unwrap();
        let want: Vec<C64> = (0..3)
            .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0))
            .collect();
        assert!(match_sets(&set.points(), &want) < 1e-14);
        // sorted lexicographically
        assert!(set.records[0].z_bar.re <= set.records[1].z_bar.re);
        for r in &set.records {
            assert_eq!(r.stability, Stability::Source); // |f'| = 2
            assert!(r.residual < 1e-10 * (1.0 + r.z_bar.norm()));
        }
    }

    #[test]
    fn case_a_fixed_points_are_non_hyperbolic() {
        let a = c(0.3, 0.7);
        let g = c(0.9, -0.2);
        let p = MapParams::new(a, a, g, g).unwrap();
        let set = fixed_points(&p).unwrap();
        assert_eq!(set.records.len(), 2);
        assert!(matches!(set.warnings[..], [FixedPointWarning::RemovableRootDropped { .. }]));
        let r = (a / g).sqrt();
        assert!(match_sets(&set.points(), &[r, -r]) < 1e-12);
        for rec in &set.records {
            assert_eq!(rec.stability, Stability::NonHyperbolic);
            assert!((rec.multiplier_abs - 1.0).abs() < 1e-12);
        }
        let closed = special_case_fixed_points(&p, SpecialCaseTag::CaseA, DEFAULT_CLASS_TOL).unwrap();
        assert!(match_sets(&closed.iter().map(|r| r.z_bar).collect::<Vec<_>>(), &set.points()) < 1e-9);
        let unit = MapParams::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let closed = special_case_fixed_points(&unit, SpecialCaseTag::CaseA, DEFAULT_CLASS_TOL).unwrap();
        assert_eq!(closed[0].z_bar, c(-1.0, 0.0));
        assert_eq!(closed[1].z_bar, c(1.0, 0.0));
        assert!(closed.iter().all(|r| r.multiplier_abs == 1.0));
    }

    #[test]
    fn case_d_unit_fixed_point_multiplier() {
        let a = c(2.0, 0.0);
        let b = c(0.5, 0.0);
        let p = MapParams::new(a, b, b, a).unwrap();
        let closed = special_case_fixed_points(&p, SpecialCaseTag::CaseD, DEFAULT_CLASS_TOL).unwrap();
        let one = closed.iter().find(|r| r.z_bar == c(1.0, 0.0)).unwrap();
        assert!((one.multiplier_abs - 0.4).abs() < 1e-15);
        assert_eq!(one.stability, Stability::Sink);
        let general = fixed_points(&p).unwrap();
        assert!(match_sets(&general.points(), &closed.iter().map(|r| r.z_bar).collect::<Vec<_>>()) < 1e-9);
        for (g, cf) in general.records.iter().zip(&closed) {
            assert!((g.multiplier_abs - cf.multiplier_abs).abs() < 1e-9);
        }
    }

    #[test]
    fn wrong_tags() {
        let p = slow_convergence();
        assert_eq!(
            special_case_fixed_points(&p, SpecialCaseTag::General, 1e-9).unwrap_err(),
            DynError::WrongTag("General")
        );
        assert_eq!(
            special_case_fixed_points(&p, SpecialCaseTag::CaseB, 1e-9).unwrap_err(),
            DynError::WrongTag("CaseB")
        );
    }

    #[test]
    fn not_a_fixed_point() {
        let err = classify_stability(&slow_convergence(), c(0.3, 0.3), 1e-9).unwrap_err();
        assert!(matches!(err, DynError::NotAFixedPoint { .. }));
    }

    #[test]
    fn near_multiple_roots_warn() {
        // γ=1, δ=0, α=3, β=−2: z³ − 3z + 2 = (z−1)²(z+2)
        let p = MapParams::from_parts([(3.0, 0.0), (-2.0, 0.0), (1.0, 0.0), (0.0, 0.0)]).unwrap();
        let set = fixed_points(&p).unwrap();
        assert!(matches!(set.warnings[0], FixedPointWarning::Conditioning { .. }));
        assert_eq!(set.records.iter().filter(|r| r.multiplicity == 2).count(), 2);
    }

    #[test]
    fn degenerate_gamma() {
        let p = MapParams::new_degenerate(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(fixed_points(&p).unwrap_err(), DynError::DegenerateMap);
    }
}
