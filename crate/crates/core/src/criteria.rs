//! Multi-start tests of the real-line modulus criteria in the complex plane.
//!
//! On the positive reals, with α < γ and β > δ, the map has solutions that
//! converge to zero when γ+δ > α+β, diverge when γ+δ < α+β, and are constant
//! when the sums agree. Here the same comparisons are made on moduli and the
//! prediction is checked against classified orbits from random starts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exec::Execution;
use crate::ext::{chordal_distance, ExtComplex, ZERO};
use crate::fixed_points::fixed_points;
use crate::orbit::{classify_orbit, iterate_orbit, OrbitClass, OrbitSettings, TerminationReason};
use crate::plane_map::{condition_signature, Cmp, ConditionSignature, MapParams};
use crate::sampling::sample_z0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealLinePrediction {
    ConvergesToZero,
    DivergesToInfinity,
    Constant,
}

impl RealLinePrediction {
    pub fn from_signature(sig: &ConditionSignature) -> Self {
        match sig.cmp_sum {
            Cmp::LT => RealLinePrediction::ConvergesToZero,
            Cmp::GT => RealLinePrediction::DivergesToInfinity,
            Cmp::EQ => RealLinePrediction::Constant,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RealLinePrediction::ConvergesToZero => "converges to zero",
            RealLinePrediction::DivergesToInfinity => "diverges to infinity",
            RealLinePrediction::Constant => "constant",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Every orbit behaves as predicted.
    Agreement,
    /// No orbit behaves as predicted.
    Contradiction,
    Partial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriteriaSettings {
    pub orbit: OrbitSettings,
    pub eq_tol: f64,
    /// Chordal tolerance for "constant" and "converges to zero".
    pub class_tol: f64,
    pub execution: Execution,
}

impl Default for CriteriaSettings {
    fn default() -> Self {
        CriteriaSettings {
            orbit: OrbitSettings::default(),
            eq_tol: crate::plane_map::DEFAULT_EQ_TOL,
            class_tol: 1e-9,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitOutcome {
    pub z0: ExtComplex,
    pub class: OrbitClass,
    pub termination: TerminationReason,
    pub n_total: usize,
    pub matches_prediction: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub signature: ConditionSignature,
    pub prediction: RealLinePrediction,
    /// Whether |α| < |γ| and |β| > |δ|, the setting of the real-line result.
    pub precondition_holds: bool,
    pub seed: u64,
    pub n_seeds: usize,
    /// Orbits counted by class label.
    pub counts: BTreeMap<String, usize>,
    /// Orbits that are `ConvergentToInfinity` or `Unbounded`.
    pub n_unbounded: usize,
    pub n_constant: usize,
    pub n_matching: usize,
    pub verdict: Verdict,
    pub orbits: Vec<OrbitOutcome>,
}

fn is_unbounded(class: OrbitClass) -> bool {
    matches!(class, OrbitClass::ConvergentToInfinity | OrbitClass::Unbounded)
}

pub fn verify_criteria(params: &MapParams, n_seeds: usize, seed: u64, settings: &CriteriaSettings) -> Result<CriteriaReport> {
    let signature = condition_signature(params, settings.eq_tol);
    let prediction = RealLinePrediction::from_signature(&signature);
    let fps = fixed_points(params)?.records;
    let starts = sample_z0(seed, n_seeds);
    let results = settings.execution.map(&starts, |z0| {
        iterate_orbit(params, *z0, &settings.orbit).map(|o| {
            let class = classify_orbit(&o, &fps, settings.class_tol);
            let matches_prediction = match prediction {
                RealLinePrediction::ConvergesToZero => {
                    o.termination == TerminationReason::ConvergedToPoint
                        && o.limit.is_some_and(|l| chordal_distance(&l, &ZERO) < settings.class_tol)
                }
                RealLinePrediction::DivergesToInfinity => is_unbounded(class),
                RealLinePrediction::Constant => class == OrbitClass::Constant,
            };
            OrbitOutcome {
                z0: *z0,
                class,
                termination: o.termination,
                n_total: o.n_total,
                matches_prediction,
            }
        })
    });
    let orbits: Vec<OrbitOutcome> = results.into_iter().collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    for o in &orbits {
        *counts.entry(o.class.label()).or_insert(0) += 1;
    }
    let n_matching = orbits.iter().filter(|o| o.matches_prediction).count();
    let verdict = if n_matching == orbits.len() {
        Verdict::Agreement
    } else if n_matching == 0 {
        Verdict::Contradiction
    } else {
        Verdict::Partial
    };
    Ok(CriteriaReport {
        precondition_holds: signature.cmp_ag == Cmp::LT && signature.cmp_bd == Cmp::GT,
        n_unbounded: orbits.iter().filter(|o| is_unbounded(o.class)).count(),
        n_constant: orbits.iter().filter(|o| o.class == OrbitClass::Constant).count(),
        signature,
        prediction,
        seed,
        n_seeds,
        counts,
        n_matching,
        verdict,
        orbits,
    })
}
