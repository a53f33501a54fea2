//! Forward orbits on the extended plane and their classification.
//!
//! Convergence is judged in the chordal metric. A run stops once W = 10
//! consecutive steps are shorter than `conv_tol` and the Cauchy tail over the
//! window stays within `10·conv_tol`; the limit is then polished on the
//! fixed-point cubic and the orbit is followed until it sits within
//! `conv_tol` of the polished limit.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{DynError, Result};
use crate::ext::{chordal_distance, ExtComplex, ZERO};
use crate::fixed_points::{fixed_point_cubic, FixedPointRecord};
use crate::plane_map::{eval_map, MapParams};

/// Consecutive sub-tolerance steps required to declare convergence.
pub const WINDOW: usize = 10;
/// Largest period searched for while iterating.
pub const MAX_PERIOD: usize = 256;
/// Number of final iterates that are always kept at stride 1.
pub const DENSE_TAIL: usize = 1000;
pub const DEFAULT_CONV_TOL: f64 = 1e-10;

const TAIL_CAPACITY: usize = 4 * MAX_PERIOD;
const PERIOD_CHECK_EVERY: usize = 256;
const AUTO_STRIDE_THRESHOLD: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminationReason {
    ConvergedToPoint,
    ConvergedToInfinity,
    PeriodicDetected(usize),
    MaxIterations,
    HitIndeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSettings {
    pub max_iter: usize,
    pub conv_tol: f64,
    /// `None` picks 1 below 10⁵ iterations and 10 above.
    pub record_stride: Option<usize>,
}

impl Default for OrbitSettings {
    fn default() -> Self {
        OrbitSettings {
            max_iter: 10_000,
            conv_tol: DEFAULT_CONV_TOL,
            record_stride: None,
        }
    }
}

impl OrbitSettings {
    pub fn stride(&self) -> usize {
        match self.record_stride {
            Some(s) => s.max(1),
            None if self.max_iter < AUTO_STRIDE_THRESHOLD => 1,
            None => 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub params: MapParams,
    pub z0: ExtComplex,
    /// Iterates `z_0, z_s, z_2s, …` for stride `s`.
    pub points: Vec<ExtComplex>,
    pub stride: usize,
    /// The final iterates at stride 1, starting at index `tail_start`.
    pub tail: Vec<ExtComplex>,
    pub tail_start: usize,
    /// Index of the last iterate computed.
    pub n_total: usize,
    pub termination: TerminationReason,
    pub limit: Option<ExtComplex>,
    pub convergence_iters: Option<usize>,
}

impl Orbit {
    pub fn last(&self) -> ExtComplex {
        *self.tail.last().unwrap_or(&self.z0)
    }

    /// All recorded iterates with their indices, in increasing order.
    pub fn samples(&self) -> Vec<(usize, ExtComplex)> {
        let mut out: Vec<(usize, ExtComplex)> = self
            .points
            .iter()
            .enumerate()
            .map(|(k, z)| (k * self.stride, *z))
            .take_while(|(n, _)| *n < self.tail_start)
            .collect();
        out.extend(self.tail.iter().enumerate().map(|(k, z)| (self.tail_start + k, *z)));
        out
    }
}

fn starts_on_trivial_cycle(z0: ExtComplex) -> bool {
    z0.is_infinite() || z0.is_zero()
}

/// Iterates the map from `z0`.
///
/// Orbits that land exactly on ∞ while {0, ∞} is a cycle of the map are
/// stopped there: from a generic start this is reported as
/// `ConvergedToInfinity`, and from `z0 ∈ {0, ∞}` as `PeriodicDetected(2)`.
pub fn iterate_orbit(params: &MapParams, z0: ExtComplex, settings: &OrbitSettings) -> Result<Orbit> {
    if settings.max_iter < 1 {
        return Err(DynError::InvalidSetting("max_iter must be at least 1".into()));
    }
    if !(settings.conv_tol > 0.0) {
        return Err(DynError::InvalidSetting("conv_tol must be positive".into()));
    }
    let stride = settings.stride();
    let tol = settings.conv_tol;
    let trivial_cycle = eval_map(params, ZERO).is_ok_and(|w| w.is_infinite());
    let cubic = fixed_point_cubic(params);

    let mut points = vec![z0];
    let mut ring: VecDeque<ExtComplex> = VecDeque::with_capacity(TAIL_CAPACITY.max(DENSE_TAIL) + 1);
    ring.push_back(z0);
    let mut z = z0;
    let mut small_steps = 0usize;
    let mut candidate: Option<ExtComplex> = None;
    let mut termination = TerminationReason::MaxIterations;
    let mut limit = None;
    let mut n = 0usize;

    while n < settings.max_iter {
        let next = match eval_map(params, z) {
            Ok(w) => w,
            Err(DynError::IndeterminateValue { .. }) => {
                termination = TerminationReason::HitIndeterminate;
                break;
            }
            Err(e) => return Err(e),
        };
        n += 1;
        let step = chordal_distance(&z, &next);
        z = next;
        if n % stride == 0 {
            points.push(z);
        }
        if ring.len() == TAIL_CAPACITY.max(DENSE_TAIL) {
            ring.pop_front();
        }
        ring.push_back(z);

        if z.is_infinite() && trivial_cycle {
            if starts_on_trivial_cycle(z0) {
                termination = TerminationReason::PeriodicDetected(2);
            } else {
                termination = TerminationReason::ConvergedToInfinity;
                limit = Some(ExtComplex::Infinity);
            }
            break;
        }

        if n == 1 && !z0.is_infinite() && step < tol {
            // started on a fixed point: a repelling one would be left only
            // through rounding error
            let target = polish_limit(&cubic, z0, tol);
            if chordal_distance(&z0, &target) < tol {
                termination = TerminationReason::ConvergedToPoint;
                limit = Some(target);
                break;
            }
        }

        if let Some(target) = candidate {
            if chordal_distance(&z, &target) < tol {
                termination = if target.is_infinite() {
                    TerminationReason::ConvergedToInfinity
                } else {
                    TerminationReason::ConvergedToPoint
                };
                limit = Some(target);
                break;
            }
            continue;
        }

        small_steps = if step < tol { small_steps + 1 } else { 0 };
        if small_steps >= WINDOW {
            let back = ring[ring.len() - 1 - WINDOW];
            if chordal_distance(&z, &back) < 10.0 * tol {
                let target = polish_limit(&cubic, z, tol);
                if chordal_distance(&z, &target) < tol {
                    termination = if target.is_infinite() {
                        TerminationReason::ConvergedToInfinity
                    } else {
                        TerminationReason::ConvergedToPoint
                    };
                    limit = Some(target);
                    break;
                }
                candidate = Some(target);
                continue;
            }
        }

        if n % PERIOD_CHECK_EVERY == 0 {
            if let Some(p) = tail_period(&ring, tol) {
                let near_trivial = |w: &ExtComplex| {
                    chordal_distance(w, &ZERO).min(chordal_distance(w, &ExtComplex::Infinity)) < tol.sqrt()
                };
                if p == 2 && trivial_cycle && !starts_on_trivial_cycle(z0) && ring.iter().rev().take(2).all(near_trivial) {
                    // absorbed by the {0, ∞} cycle before overflowing
                    termination = TerminationReason::ConvergedToInfinity;
                    limit = Some(ExtComplex::Infinity);
                } else {
                    termination = TerminationReason::PeriodicDetected(p);
                }
                break;
            }
        }
    }

    let keep = ring.len().min(DENSE_TAIL);
    let tail: Vec<ExtComplex> = ring.iter().skip(ring.len() - keep).copied().collect();
    let tail_start = n + 1 - keep;
    let mut orbit = Orbit {
        params: *params,
        z0,
        points,
        stride,
        tail,
        tail_start,
        n_total: n,
        termination,
        limit,
        convergence_iters: None,
    };
    if let Some(target) = limit {
        orbit.convergence_iters = convergence_time(&orbit, target, tol).ok();
    }
    Ok(orbit)
}

/// Newton steps on the fixed-point cubic; the polished root replaces the
/// iterate only when it lies within `√tol` of it.
fn polish_limit(cubic: &crate::poly::Poly, z: ExtComplex, tol: f64) -> ExtComplex {
    let Some(w) = z.finite() else { return z };
    let polished = cubic.polish(w, 3);
    if (polished - w).norm() < tol.sqrt() * (1.0 + w.norm()) {
        ExtComplex::Finite(polished)
    } else {
        z
    }
}

/// Smallest p in 2..=MAX_PERIOD with `d(z_n, z_{n−p}) < tol` over the last
/// 3p iterates whose points are also separated by more than `√tol` under
/// every shift by a proper divisor of p. The separation test keeps an orbit
/// spiralling into a fixed point with multiplier near −1 from passing as a
/// 2-cycle.
fn tail_period(ring: &VecDeque<ExtComplex>, tol: f64) -> Option<usize> {
    let len = ring.len();
    let at = |j: usize| &ring[len - 1 - j];
    let sep = tol.sqrt();
    (2..=MAX_PERIOD).find(|&p| {
        let span = 3 * p;
        if len < span + p {
            return false;
        }
        (0..span).all(|j| chordal_distance(at(j), at(j + p)) < tol)
            && (1..p)
                .filter(|d| p % d == 0)
                .all(|d| (0..p).any(|j| chordal_distance(at(j), at(j + d)) > sep))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitClass {
    /// Converged to the fixed point with this 1-based index in the given list.
    ConvergentToFixedPoint(usize),
    ConvergentToInfinity,
    /// The initial value is itself fixed.
    Constant,
    Periodic(usize),
    /// Ran out of iterations with iterates escaping past the reporting bound.
    Unbounded,
    /// Ran out of iterations while staying bounded.
    ChaoticCandidate,
    Indeterminate,
}

impl OrbitClass {
    pub fn label(&self) -> String {
        match self {
            OrbitClass::ConvergentToFixedPoint(i) => format!("ConvergentToFixedPoint({i})"),
            OrbitClass::ConvergentToInfinity => "ConvergentToInfinity".into(),
            OrbitClass::Constant => "Constant".into(),
            OrbitClass::Periodic(p) => format!("Periodic({p})"),
            OrbitClass::Unbounded => "Unbounded".into(),
            OrbitClass::ChaoticCandidate => "ChaoticCandidate".into(),
            OrbitClass::Indeterminate => "Indeterminate".into(),
        }
    }
}

/// Modulus beyond which a non-terminating orbit counts as unbounded.
pub const UNBOUNDED_MODULUS: f64 = 1e6;

pub fn classify_orbit(orbit: &Orbit, fps: &[FixedPointRecord], tol: f64) -> OrbitClass {
    let z0 = orbit.z0;
    if orbit.samples().iter().all(|(_, z)| chordal_distance(z, &z0) < tol) {
        return OrbitClass::Constant;
    }
    match orbit.termination {
        TerminationReason::ConvergedToPoint => {
            let limit = orbit.limit.unwrap_or_else(|| orbit.last());
            fps.iter()
                .map(|r| (r.index, chordal_distance(&limit, &ExtComplex::Finite(r.z_bar))))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(i, _)| OrbitClass::ConvergentToFixedPoint(i))
                .unwrap_or(OrbitClass::ChaoticCandidate)
        }
        TerminationReason::ConvergedToInfinity => OrbitClass::ConvergentToInfinity,
        TerminationReason::PeriodicDetected(p) => OrbitClass::Periodic(p),
        TerminationReason::HitIndeterminate => OrbitClass::Indeterminate,
        TerminationReason::MaxIterations => {
            if orbit.tail.iter().any(|z| z.modulus() > UNBOUNDED_MODULUS) {
                OrbitClass::Unbounded
            } else {
                OrbitClass::ChaoticCandidate
            }
        }
    }
}

/// Smallest n with `d(z_m, target) < tol` for every recorded m ≥ n.
///
/// Exact when the dense tail covers the final approach; otherwise resolved
/// to the recording stride.
pub fn convergence_time(orbit: &Orbit, target: ExtComplex, tol: f64) -> Result<usize> {
    let samples = orbit.samples();
    let last = samples.last().expect("orbit has z0");
    if chordal_distance(&last.1, &target) >= tol {
        return Err(DynError::NotConverged);
    }
    let first_outside = samples
        .iter()
        .rposition(|(_, z)| chordal_distance(z, &target) >= tol);
    Ok(match first_outside {
        None => 0,
        Some(k) if samples[k].0 + 1 == samples[k + 1].0 => samples[k + 1].0,
        // gap between decimated samples: the true entry lies in (n_k, n_{k+1}]
        Some(k) => samples[k + 1].0,
    })
}

/// The raw iterates `z_{n_transient}, …, z_{n_transient+n-1}` with no stopping rule.
///
/// Stops early, returning what it has, when the orbit hits an indeterminate point.
pub fn trajectory(params: &MapParams, z0: ExtComplex, n_transient: usize, n: usize) -> Vec<ExtComplex> {
    let mut out = Vec::with_capacity(n);
    let mut z = z0;
    for k in 0..n_transient + n {
        if k >= n_transient {
            out.push(z);
        }
        match eval_map(params, z) {
            Ok(next) => z = next,
            Err(_) => break,
        }
    }
    out
}
