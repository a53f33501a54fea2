//! Lyapunov exponents, box-counting dimensions and the fractal-like scan.

use serde::{Deserialize, Serialize};

use crate::error::{DynError, Result};
use crate::exec::Execution;
use crate::ext::{ExtComplex, C64};
use crate::plane_map::{
    condition_signature, eval_derivative, eval_map, singular_points, Cmp, ConditionSignature, MapParams,
    DEFAULT_EQ_TOL,
};
use crate::sampling::sample_z0;

pub const DEFAULT_N_TRANSIENT: usize = 1_000;
pub const DEFAULT_N_SAMPLE: usize = 10_000;
pub const MIN_LYAPUNOV_SAMPLES: usize = 1_000;
pub const MIN_BOX_POINTS: usize = 10_000;
pub const MIN_SCALES: usize = 5;
pub const MIN_R2: f64 = 0.98;
pub const DEFAULT_DIM_BAND: (f64, f64) = (1.05, 1.95);
/// Iterates this close to a pole are left out of the Lyapunov sum.
pub const POLE_GUARD: f64 = 1e-12;
pub const MAX_SKIP_FRACTION: f64 = 0.1;
/// Seed of the fixed initial-value set used by [`chaos_report`].
pub const CHAOS_Z0_SEED: u64 = 20_240_601;
pub const CHAOS_Z0_COUNT: usize = 10;

/// Box sides 2⁻¹ … 2⁻⁸ of the bounding-box diagonal.
pub fn default_scales() -> Vec<f64> {
    (1..=8).map(|k| 0.5f64.powi(k)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub lambda: f64,
    pub samples: usize,
    pub skipped: usize,
    /// The finite sampled iterates, in orbit order.
    #[serde(skip)]
    pub cloud: Vec<C64>,
}

/// Mean of ln|f′(z_k)| over `n_sample` iterates after `n_transient` steps.
///
/// Iterates at ∞, within [`POLE_GUARD`] of a pole, or at a critical point
/// are skipped and the orbit is extended to replace them; more than 10% of
/// `n_sample` skips is an error.
pub fn lyapunov_estimate(
    params: &MapParams,
    z0: ExtComplex,
    n_transient: usize,
    n_sample: usize,
) -> Result<LyapunovEstimate> {
    if n_sample < MIN_LYAPUNOV_SAMPLES {
        return Err(DynError::InvalidSetting(format!(
            "n_sample must be at least {MIN_LYAPUNOV_SAMPLES}"
        )));
    }
    let poles: Vec<C64> = singular_points(params)?.into_iter().filter_map(|z| z.finite()).collect();
    let max_skip = (MAX_SKIP_FRACTION * n_sample as f64).floor() as usize;
    let mut z = z0;
    for _ in 0..n_transient {
        z = eval_map(params, z)?;
    }
    let mut sum = 0.0;
    let mut cloud = Vec::with_capacity(n_sample);
    let mut skipped = 0;
    while cloud.len() < n_sample {
        let usable = z.finite().filter(|c| {
            poles.iter().all(|p| (c - p).norm() >= POLE_GUARD * (1.0 + p.norm()))
        });
        let term = usable.and_then(|c| {
            eval_derivative(params, ExtComplex::Finite(c))
                .ok()
                .map(|d| d.norm().ln())
                .filter(|l| l.is_finite())
                .map(|l| (c, l))
        });
        match term {
            Some((c, l)) => {
                sum += l;
                cloud.push(c);
            }
            None => {
                skipped += 1;
                if skipped > max_skip {
                    return Err(DynError::InsufficientSamples {
                        skipped,
                        window: n_sample,
                    });
                }
            }
        }
        z = eval_map(params, z)?;
    }
    Ok(LyapunovEstimate {
        lambda: sum / n_sample as f64,
        samples: n_sample,
        skipped,
        cloud,
    })
}

/// Largest Lyapunov exponent in nats per iteration.
pub fn lyapunov_exponent(params: &MapParams, z0: ExtComplex, n_transient: usize, n_sample: usize) -> Result<f64> {
    lyapunov_estimate(params, z0, n_transient, n_sample).map(|e| e.lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CloudShape {
    /// All points coincide.
    Point,
    /// Zero-area bounding box: the count is effectively one-dimensional.
    Line,
    Planar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxFit {
    /// Absolute box sides ε, decreasing.
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n_points: usize,
    pub shape: CloudShape,
}

impl BoxFit {
    /// Whether the fit is good enough to report a dimension.
    pub fn is_valid(&self) -> bool {
        self.r2 >= MIN_R2 && self.scales.len() >= MIN_SCALES
    }
}

fn check_scales(scales: &[f64]) -> Result<()> {
    if scales.len() < MIN_SCALES {
        return Err(DynError::InvalidScales(format!(
            "need at least {MIN_SCALES} scales, got {}",
            scales.len()
        )));
    }
    if scales.iter().any(|s| !(s.is_finite() && *s > 0.0 && *s <= 1.0)) {
        return Err(DynError::InvalidScales("scales must lie in (0, 1]".into()));
    }
    if scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(DynError::InvalidScales("scales must be strictly decreasing".into()));
    }
    Ok(())
}

fn occupied(points: &[C64], origin: C64, eps: f64, exec: Execution) -> usize {
    const CHUNK: usize = 4096;
    let chunks: Vec<&[C64]> = points.chunks(CHUNK).collect();
    let parts = exec.map(&chunks, |chunk| {
        let mut keys: Vec<(i64, i64)> = chunk
            .iter()
            .map(|p| {
                (
                    ((p.re - origin.re) / eps).floor() as i64,
                    ((p.im - origin.im) / eps).floor() as i64,
                )
            })
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    });
    let mut all: Vec<(i64, i64)> = parts.into_iter().flatten().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// Least-squares line through (x, y); returns (slope, intercept, r²).
fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    (slope, intercept, r2)
}

/// Box-counting dimension of a finite point cloud.
///
/// `scales` are box sides relative to the bounding-box diagonal. Boxes are
/// anchored at the lower-left corner of the bounding box. The slope of
/// ln N(ε) against ln(1/ε) is the dimension.
pub fn box_counting_dimension(points: &[C64], scales: &[f64]) -> Result<(f64, BoxFit)> {
    box_counting_dimension_with(points, scales, Execution::default())
}

pub fn box_counting_dimension_with(points: &[C64], scales: &[f64], exec: Execution) -> Result<(f64, BoxFit)> {
    if points.len() < MIN_BOX_POINTS {
        return Err(DynError::InsufficientPoints {
            got: points.len(),
            need: MIN_BOX_POINTS,
        });
    }
    check_scales(scales)?;
    if points.iter().any(|p| !(p.re.is_finite() && p.im.is_finite())) {
        return Err(DynError::NonFiniteValue);
    }
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo.re = lo.re.min(p.re);
        lo.im = lo.im.min(p.im);
        hi.re = hi.re.max(p.re);
        hi.im = hi.im.max(p.im);
    }
    let (w, h) = (hi.re - lo.re, hi.im - lo.im);
    let diag = w.hypot(h);
    let shape = if diag == 0.0 {
        CloudShape::Point
    } else if w == 0.0 || h == 0.0 {
        CloudShape::Line
    } else {
        CloudShape::Planar
    };
    let (abs_scales, counts): (Vec<f64>, Vec<usize>) = if shape == CloudShape::Point {
        (scales.to_vec(), vec![1; scales.len()])
    } else {
        scales
            .iter()
            .map(|s| {
                let eps = s * diag;
                (eps, occupied(points, lo, eps, exec))
            })
            .unzip()
    };
    let x: Vec<f64> = abs_scales.iter().map(|e| -e.ln()).collect();
    let y: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let (slope, intercept, r2) = fit_line(&x, &y);
    Ok((
        slope,
        BoxFit {
            scales: abs_scales,
            counts,
            slope,
            intercept,
            r2,
            n_points: points.len(),
            shape,
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChaosSettings {
    pub n_transient: usize,
    pub n_sample: usize,
    /// Relative box sides.
    pub scales: Vec<f64>,
    pub dim_band: (f64, f64),
    pub eq_tol: f64,
    pub z0: Vec<ExtComplex>,
    pub execution: Execution,
}

impl Default for ChaosSettings {
    fn default() -> Self {
        ChaosSettings {
            n_transient: DEFAULT_N_TRANSIENT,
            n_sample: DEFAULT_N_SAMPLE,
            scales: default_scales(),
            dim_band: DEFAULT_DIM_BAND,
            eq_tol: DEFAULT_EQ_TOL,
            z0: sample_z0(CHAOS_Z0_SEED, CHAOS_Z0_COUNT),
            execution: Execution::default(),
        }
    }
}

/// Metrics of one orbit of a [`ChaosReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedMetrics {
    pub z0: ExtComplex,
    pub lyapunov: Option<f64>,
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_fit: Option<BoxFit>,
    /// Error name when the orbit gave no Lyapunov estimate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Chaos metrics over a fixed set of initial values.
///
/// `lyapunov` is the mean over orbits with an estimate. Box counting runs
/// only when that mean is positive; `box_dim` is then the lower median of
/// the valid per-orbit fits, reported when at least half the orbits give a
/// valid fit, and `box_fit` is the fit attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChaosReport {
    pub lyapunov: Option<f64>,
    pub n_transient: usize,
    pub n_sample: usize,
    pub box_dim: Option<f64>,
    pub box_fit: Option<BoxFit>,
    pub fractal_like: Option<bool>,
    pub signature: ConditionSignature,
    pub seeds: Vec<SeedMetrics>,
}

impl ChaosReport {
    /// Slopes of the valid per-orbit fits.
    pub fn valid_dims(&self) -> Vec<f64> {
        self.seeds
            .iter()
            .filter_map(|s| s.box_fit.as_ref())
            .filter(|f| f.is_valid())
            .map(|f| f.slope)
            .collect()
    }
}

pub fn chaos_report(params: &MapParams, settings: &ChaosSettings) -> ChaosReport {
    let estimates = settings.execution.map(&settings.z0, |z0| {
        lyapunov_estimate(params, *z0, settings.n_transient, settings.n_sample)
    });
    let lambdas: Vec<f64> = estimates.iter().filter_map(|e| e.as_ref().ok().map(|e| e.lambda)).collect();
    let lyapunov = (!lambdas.is_empty()).then(|| lambdas.iter().sum::<f64>() / lambdas.len() as f64);
    let chaotic = lyapunov.is_some_and(|l| l > 0.0);

    let fits: Vec<Option<BoxFit>> = if chaotic {
        settings.execution.map(&estimates, |e| {
            e.as_ref()
                .ok()
                .and_then(|e| box_counting_dimension_with(&e.cloud, &settings.scales, Execution::Sequential).ok())
                .map(|(_, fit)| fit)
        })
    } else {
        vec![None; estimates.len()]
    };

    let seeds: Vec<SeedMetrics> = settings
        .z0
        .iter()
        .zip(estimates)
        .zip(fits)
        .map(|((z0, est), box_fit)| match est {
            Ok(e) => SeedMetrics {
                z0: *z0,
                lyapunov: Some(e.lambda),
                skipped: e.skipped,
                box_fit,
                error: None,
            },
            Err(err) => SeedMetrics {
                z0: *z0,
                lyapunov: None,
                skipped: match err {
                    DynError::InsufficientSamples { skipped, .. } => skipped,
                    _ => 0,
                },
                box_fit: None,
                error: Some(err.name().to_string()),
            },
        })
        .collect();

    let mut valid: Vec<&BoxFit> = seeds
        .iter()
        .filter_map(|s| s.box_fit.as_ref())
        .filter(|f| f.is_valid())
        .collect();
    valid.sort_by(|a, b| a.slope.total_cmp(&b.slope));
    let representative = (!valid.is_empty() && 2 * valid.len() >= seeds.len()).then(|| valid[(valid.len() - 1) / 2].clone());

    let mut report = ChaosReport {
        lyapunov,
        n_transient: settings.n_transient,
        n_sample: settings.n_sample,
        box_dim: representative.as_ref().map(|f| f.slope),
        box_fit: representative,
        fractal_like: None,
        signature: condition_signature(params, settings.eq_tol),
        seeds,
    };
    report.fractal_like = classify_fractal_like(&report, settings.dim_band).ok();
    report
}

/// Fractal-like: a positive Lyapunov exponent and a stable fractional box
/// dimension, meaning `box_dim` and every valid per-orbit dimension lie
/// strictly inside `dim_band`.
pub fn classify_fractal_like(report: &ChaosReport, dim_band: (f64, f64)) -> Result<bool> {
    match report.lyapunov {
        Some(l) if l > 0.0 => {}
        other => return Err(DynError::NotChaotic(other.unwrap_or(f64::NAN))),
    }
    let inside = |d: f64| d > dim_band.0 && d < dim_band.1;
    Ok(report.box_dim.is_some_and(inside) && report.valid_dims().into_iter().all(inside))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SignatureClass {
    /// (LT, LT, LT)
    AllLess,
    /// (GT, GT, GT)
    AllGreater,
    Mixed,
}

impl SignatureClass {
    pub fn of(sig: &ConditionSignature) -> Self {
        if sig.is_all(Cmp::LT) {
            SignatureClass::AllLess
        } else if sig.is_all(Cmp::GT) {
            SignatureClass::AllGreater
        } else {
            SignatureClass::Mixed
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SignatureClass::AllLess => "(LT,LT,LT)",
            SignatureClass::AllGreater => "(GT,GT,GT)",
            SignatureClass::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub index: usize,
    pub params: MapParams,
    pub report: ChaosReport,
    /// Fractal-like only if (LT, LT, LT).
    pub conjecture_consistent: bool,
    /// Fractal-like only if (GT, GT, GT).
    pub table_consistent: bool,
}

impl ScanOutcome {
    pub fn new(index: usize, params: MapParams, report: ChaosReport) -> Self {
        let class = SignatureClass::of(&report.signature);
        let fl = report.fractal_like == Some(true);
        ScanOutcome {
            index,
            params,
            conjecture_consistent: !fl || class == SignatureClass::AllLess,
            table_consistent: !fl || class == SignatureClass::AllGreater,
            report,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyRow {
    pub fractal_like: usize,
    pub fractal_unlike: usize,
    pub not_chaotic: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientationTally {
    /// The claim tested, e.g. "fractal-like only if (LT,LT,LT)".
    pub claim: String,
    pub consistent: usize,
    /// Indices of fractal-like outcomes violating the claim.
    pub counterexamples: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub n_params: usize,
    pub all_less: ContingencyRow,
    pub all_greater: ContingencyRow,
    pub mixed: ContingencyRow,
    pub conjecture: OrientationTally,
    pub table: OrientationTally,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub outcomes: Vec<ScanOutcome>,
    pub summary: ScanSummary,
}

pub fn summarize(outcomes: &[ScanOutcome]) -> ScanSummary {
    let mut rows = [ContingencyRow::default(), ContingencyRow::default(), ContingencyRow::default()];
    let mut conj = Vec::new();
    let mut table = Vec::new();
    for o in outcomes {
        let class = SignatureClass::of(&o.report.signature);
        let row = &mut rows[class as usize];
        match o.report.fractal_like {
            Some(true) => row.fractal_like += 1,
            Some(false) => row.fractal_unlike += 1,
            None => row.not_chaotic += 1,
        }
        if !o.conjecture_consistent {
            conj.push(o.index);
        }
        if !o.table_consistent {
            table.push(o.index);
        }
    }
    let n = outcomes.len();
    let mut notes = Vec::new();
    if !conj.is_empty() {
        notes.push(format!(
            "orientation conflict: {} fractal-like outcome(s) lack the (LT,LT,LT) signature that the conjecture \
             requires; {} of them carry (GT,GT,GT), the pairing shown by the reference table",
            conj.len(),
            outcomes
                .iter()
                .filter(|o| !o.conjecture_consistent && SignatureClass::of(&o.report.signature) == SignatureClass::AllGreater)
                .count()
        ));
    }
    if !table.is_empty() {
        notes.push(format!(
            "{} fractal-like outcome(s) lack the (GT,GT,GT) signature of the reference table's pairing",
            table.len()
        ));
    }
    let [all_less, all_greater, mixed] = rows;
    ScanSummary {
        n_params: n,
        all_less,
        all_greater,
        mixed,
        conjecture: OrientationTally {
            claim: "fractal-like only if (LT,LT,LT)".into(),
            consistent: n - conj.len(),
            counterexamples: conj,
        },
        table: OrientationTally {
            claim: "fractal-like only if (GT,GT,GT)".into(),
            consistent: n - table.len(),
            counterexamples: table,
        },
        notes,
    }
}

/// Chaos reports for the given parameter sets, in input order.
pub fn scan_params(params: &[MapParams], settings: &ChaosSettings) -> ScanReport {
    let inner = ChaosSettings {
        execution: Execution::Sequential,
        ..settings.clone()
    };
    let indexed: Vec<(usize, MapParams)> = params.iter().copied().enumerate().collect();
    let outcomes = settings
        .execution
        .map(&indexed, |(i, p)| ScanOutcome::new(*i, *p, chaos_report(p, &inner)));
    let summary = summarize(&outcomes);
    ScanReport { outcomes, summary }
}

/// Seeded scan over `n_params` random parameter sets.
pub fn conjecture_scan(sampler_seed: u64, n_params: usize, settings: &ChaosSettings) -> ScanReport {
    scan_params(&crate::sampling::sample_params(sampler_seed, n_params), settings)
}
