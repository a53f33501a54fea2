use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;

use ratdyn::chaos::{chaos_report, scan_params, ChaosSettings, ScanOutcome, SignatureClass};
use ratdyn::criteria::{verify_criteria, CriteriaSettings};
use ratdyn::cycles::{
    detect_cycle_up_to, has_trivial_cycle, second_iterate_fixed_set, zero_infinity_multiplier, CycleRecord,
    SecondIterateSet,
};
use ratdyn::ext::{format_c64, format_sig, C64};
use ratdyn::fixed_points::{fixed_points_with_tol, FixedPointRecord};
use ratdyn::orbit::{classify_orbit, iterate_orbit, trajectory, OrbitSettings};
use ratdyn::plane_map::{condition_signature, detect_special_case, DEFAULT_MATCH_TOL};
use ratdyn::render::{render_scatter, PlotSpec};
use ratdyn::{DynError, ExtComplex, MapParams, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;

/// What a command produced: the human table, the machine payload and the
/// parameters it ran on.
pub struct Outcome {
    pub params: Option<MapParams>,
    pub table: String,
    pub outputs: Value,
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn sig6(x: f64) -> String {
    format_sig(x, 6)
}

fn opt6(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), sig6)
}

pub fn resolve_params(src: &ParamSource) -> Result<MapParams> {
    if let Some(name) = &src.preset {
        return ratdyn::presets::by_name(name).ok_or_else(|| DynError::InvalidSetting(format!("unknown preset {name}")));
    }
    let ParamQuad([a, b, g, d]) = src.params.expect("clap enforces one parameter source");
    MapParams::new(a, b, g, d)
}

fn csv_err(e: csv::Error) -> DynError {
    DynError::Io(e.to_string())
}

fn write_fixed_points_csv(records: &[FixedPointRecord], path: &std::path::Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(["index", "re", "im", "multiplier_abs", "stability", "residual", "multiplicity"])
        .map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.index.to_string(),
            r.z_bar.re.to_string(),
            r.z_bar.im.to_string(),
            r.multiplier_abs.to_string(),
            format!("{:?}", r.stability),
            r.residual.to_string(),
            r.multiplicity.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn fixed_points_cmd(a: &FixedPointsArgs) -> Result<Outcome> {
    let params = resolve_params(&a.source)?;
    let set = fixed_points_with_tol(&params, a.class_tol)?;
    let sig = condition_signature(&params, a.eq_tol);
    let special = detect_special_case(&params, DEFAULT_MATCH_TOL);
    if let Some(path) = &a.csv {
        write_fixed_points_csv(&set.records, path)?;
    }
    let mut t = String::new();
    writeln!(t, "signature (|α|:|γ|, |β|:|δ|, |α+β|:|γ+δ|) = {sig}").unwrap();
    writeln!(t, "special case: {}", special.tag.name()).unwrap();
    if let Some(d) = special.reduced_description() {
        writeln!(t, "reduces to: {d}").unwrap();
    }
    writeln!(t, "{:>3}  {:<30} {:>12}  {:<15} {:>10}", "#", "z̄", "|f′(z̄)|", "class", "residual").unwrap();
    for r in &set.records {
        writeln!(
            t,
            "{:>3}  {:<30} {:>12}  {:<15} {:>10}",
            r.index,
            format_c64(r.z_bar, 6),
            sig6(r.multiplier_abs),
            format!("{:?}", r.stability),
            format!("{:.1e}", r.residual)
        )
        .unwrap();
    }
    for w in &set.warnings {
        writeln!(t, "warning: {w:?}").unwrap();
    }
    Ok(Outcome {
        params: Some(params),
        table: t,
        outputs: json!({ "fixed_points": set, "signature": sig, "special_case": special }),
    })
}

pub fn orbit_cmd(a: &OrbitArgs) -> Result<Outcome> {
    let params = resolve_params(&a.source)?;
    let settings = OrbitSettings {
        max_iter: a.max_iter,
        conv_tol: a.tol,
        record_stride: a.stride,
    };
    let orbit = iterate_orbit(&params, a.z0, &settings)?;
    let fps = fixed_points_with_tol(&params, ratdyn::fixed_points::DEFAULT_CLASS_TOL)?;
    let class = classify_orbit(&orbit, &fps.records, a.class_tol);
    if let Some(path) = &a.csv {
        ratdyn::io::write_orbit_csv(&orbit, BufWriter::new(File::create(path)?))?;
    }
    let mut t = String::new();
    writeln!(t, "z0           {}", orbit.z0).unwrap();
    writeln!(t, "termination  {:?}", orbit.termination).unwrap();
    writeln!(t, "class        {}", class.label()).unwrap();
    writeln!(t, "iterations   {}", orbit.n_total).unwrap();
    writeln!(t, "last         {}", orbit.last()).unwrap();
    if let Some(l) = orbit.limit {
        writeln!(t, "limit        {l}").unwrap();
    }
    if let Some(k) = orbit.convergence_iters {
        writeln!(t, "converged at {k}").unwrap();
    }
    Ok(Outcome {
        params: Some(params),
        table: t,
        outputs: json!({
            "z0": orbit.z0,
            "termination": orbit.termination,
            "class": class,
            "n_total": orbit.n_total,
            "last": orbit.last(),
            "limit": orbit.limit,
            "convergence_iters": orbit.convergence_iters,
        }),
    })
}

#[derive(Serialize)]
struct FoundCycle {
    cycle: CycleRecord,
    /// Starts whose orbits settled on this cycle.
    hits: usize,
}

pub fn cycles_cmd(a: &CyclesArgs) -> Result<Outcome> {
    let params = resolve_params(&a.source)?;
    let starts = a.starts.starts();
    let found: Vec<Option<CycleRecord>> = ratdyn::exec::Execution::default().map(&starts, |z0| {
        detect_cycle_up_to(&params, *z0, a.transient, a.probe, a.match_tol, a.max_period)
    });
    let mut cycles: Vec<FoundCycle> = Vec::new();
    let mut none = 0;
    for rec in found {
        let Some(rec) = rec else {
            none += 1;
            continue;
        };
        match cycles.iter_mut().find(|c| c.cycle.same_cycle(&rec, 1e-6)) {
            Some(c) => c.hits += 1,
            None => cycles.push(FoundCycle { cycle: rec, hits: 1 }),
        }
    }
    cycles.sort_by_key(|c| c.cycle.prime_period);
    let trivial = has_trivial_cycle(&params);
    let zi = if trivial { Some(zero_infinity_multiplier(&params)?) } else { None };
    let second = second_iterate_fixed_set(&params)?;

    let mut t = String::new();
    for c in &cycles {
        writeln!(
            t,
            "period {:>3}  hits {:>3}  |multiplier| {:>12}  residual {:.1e}",
            c.cycle.prime_period,
            c.hits,
            opt6(c.cycle.multiplier.map(|m| m.norm())),
            c.cycle.residual
        )
        .unwrap();
        for z in &c.cycle.points {
            writeln!(t, "    {z}").unwrap();
        }
    }
    writeln!(t, "no cycle found from {none} of {} starts", starts.len()).unwrap();
    if let Some(m) = zi {
        writeln!(t, "{{0, ∞}} 2-cycle: multiplier {} (|·| = {})", format_c64(m, 6), sig6(m.norm())).unwrap();
    }
    match &second {
        SecondIterateSet::IdenticallyPeriodic => writeln!(t, "f∘f is the identity").unwrap(),
        SecondIterateSet::Roots(r) => {
            let pts: Vec<String> = r.iter().map(|(z, _)| z.to_string()).collect();
            writeln!(t, "2-periodic points beyond the fixed points: {{{}}}", pts.join(", ")).unwrap();
        }
    }
    Ok(Outcome {
        params: Some(params),
        table: t,
        outputs: json!({
            "cycles": cycles,
            "starts_without_cycle": none,
            "zero_infinity_multiplier": zi.map(|m: C64| json!({"re": m.re, "im": m.im})),
            "second_iterate": second,
        }),
    })
}

fn chaos_settings(transient: usize, samples: usize, eq_tol: f64, z0: &[ExtComplex]) -> ChaosSettings {
    let mut s = ChaosSettings {
        n_transient: transient,
        n_sample: samples,
        eq_tol,
        ..Default::default()
    };
    if !z0.is_empty() {
        s.z0 = z0.to_vec();
    }
    s
}

pub fn chaos_cmd(a: &ChaosArgs) -> Result<Outcome> {
    let params = resolve_params(&a.source)?;
    let report = chaos_report(&params, &chaos_settings(a.transient, a.samples, a.eq_tol, &a.z0));
    let mut t = String::new();
    writeln!(t, "signature     {}", report.signature).unwrap();
    writeln!(t, "lyapunov      {}", opt6(report.lyapunov)).unwrap();
    writeln!(t, "box dimension {}", opt6(report.box_dim)).unwrap();
    if let Some(f) = &report.box_fit {
        writeln!(t, "fit r²        {}", sig6(f.r2)).unwrap();
    }
    let fl = match report.fractal_like {
        Some(true) => "yes",
        Some(false) => "no",
        None => "not chaotic",
    };
    writeln!(t, "fractal-like  {fl}").unwrap();
    writeln!(t, "{:<30} {:>12} {:>12} {:>10}", "z0", "λ", "dim", "r²").unwrap();
    for s in &report.seeds {
        let (d, r2) = s.box_fit.as_ref().map_or((None, None), |f| (Some(f.slope), Some(f.r2)));
        let lam = match (&s.lyapunov, &s.error) {
            (Some(l), _) => sig6(*l),
            (None, Some(e)) => e.clone(),
            (None, None) => "-".into(),
        };
        writeln!(t, "{:<30} {:>12} {:>12} {:>10}", s.z0.to_string(), lam, opt6(d), opt6(r2)).unwrap();
    }
    Ok(Outcome {
        params: Some(params),
        table: t,
        outputs: value(&report),
    })
}

/// One CSV/summary row of a scan.
#[derive(Serialize)]
struct ScanRow {
    index: usize,
    source: String,
    params: String,
    signature: &'static str,
    lyapunov: Option<f64>,
    box_dim: Option<f64>,
    fractal_like: Option<bool>,
}

fn scan_row(o: &ScanOutcome, n_rows: usize) -> ScanRow {
    ScanRow {
        index: o.index,
        source: if o.index < n_rows {
            format!("table-row-{}", o.index + 1)
        } else {
            format!("draw-{}", o.index - n_rows)
        },
        params: o.params.to_string(),
        signature: SignatureClass::of(&o.report.signature).label(),
        lyapunov: o.report.lyapunov,
        box_dim: o.report.box_dim,
        fractal_like: o.report.fractal_like,
    }
}

pub fn scan_cmd(a: &ScanArgs) -> Result<Outcome> {
    let mut params: Vec<MapParams> = Vec::new();
    if a.table_rows {
        params.extend(ratdyn::presets::chaotic_rows());
    }
    let n_rows = params.len();
    params.extend(ratdyn::sampling::sample_params(a.seed, a.n));
    let report = scan_params(&params, &chaos_settings(a.transient, a.samples, a.eq_tol, &[]));
    let rows: Vec<ScanRow> = report.outcomes.iter().map(|o| scan_row(o, n_rows)).collect();
    if let Some(path) = &a.full_report {
        std::fs::write(path, ratdyn::io::to_json(&report)?)?;
    }
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
        for r in &rows {
            w.serialize(r).map_err(csv_err)?;
        }
        w.flush()?;
    }
    let s = &report.summary;
    let mut t = String::new();
    writeln!(t, "{} parameter sets ({} reference rows, {} draws, seed {})", s.n_params, n_rows, a.n, a.seed).unwrap();
    writeln!(t, "{:<12} {:>13} {:>15} {:>12}", "signature", "fractal-like", "fractal-unlike", "not chaotic").unwrap();
    for (label, row) in [("(LT,LT,LT)", &s.all_less), ("(GT,GT,GT)", &s.all_greater), ("mixed", &s.mixed)] {
        writeln!(t, "{label:<12} {:>13} {:>15} {:>12}", row.fractal_like, row.fractal_unlike, row.not_chaotic).unwrap();
    }
    for tally in [&s.conjecture, &s.table] {
        writeln!(
            t,
            "{}: {} consistent, counterexamples {:?}",
            tally.claim, tally.consistent, tally.counterexamples
        )
        .unwrap();
    }
    for r in rows.iter().take(n_rows) {
        writeln!(
            t,
            "{}  {}  λ={}  dim={}  fractal-like={:?}",
            r.source,
            r.signature,
            opt6(r.lyapunov),
            opt6(r.box_dim),
            r.fractal_like
        )
        .unwrap();
    }
    for n in &s.notes {
        writeln!(t, "note: {n}").unwrap();
    }
    Ok(Outcome {
        params: None,
        table: t,
        outputs: json!({ "summary": s, "rows": rows }),
    })
}

pub fn criteria_cmd(a: &CriteriaArgs) -> Result<Outcome> {
    let params = resolve_params(&a.source)?;
    if a.seeds == 0 {
        return Err(DynError::InvalidSetting("--seeds must be at least 1".into()));
    }
    let settings = CriteriaSettings {
        orbit: OrbitSettings {
            max_iter: a.max_iter,
            conv_tol: a.tol,
            record_stride: None,
        },
        eq_tol: a.eq_tol,
        class_tol: a.class_tol,
        ..Default::default()
    };
    let r = verify_criteria(&params, a.seeds, a.seed, &settings)?;
    let mut t = String::new();
    writeln!(t, "signature     {}", r.signature).unwrap();
    writeln!(t, "precondition  |α|<|γ| and |β|>|δ|: {}", r.precondition_holds).unwrap();
    writeln!(t, "prediction    {}", r.prediction.label()).unwrap();
    writeln!(t, "orbits        {}", r.n_seeds).unwrap();
    for (label, n) in &r.counts {
        writeln!(t, "  {label:<28} {n}").unwrap();
    }
    writeln!(t, "unbounded     {}/{}", r.n_unbounded, r.n_seeds).unwrap();
    writeln!(t, "constant      {}/{}", r.n_constant, r.n_seeds).unwrap();
    writeln!(t, "matching      {}/{}", r.n_matching, r.n_seeds).unwrap();
    writeln!(t, "verdict       {:?}", r.verdict).unwrap();
    Ok(Outcome {
        params: Some(params),
        table: t,
        outputs: value(&r),
    })
}

pub fn render_cmd(a: &RenderArgs) -> Result<Outcome> {
    let params = resolve_params(&a.source)?;
    let spec = PlotSpec {
        width: a.width,
        height: a.height,
        viewport: a.viewport,
        point_style: a.style.into(),
    };
    spec.validate()?;
    let starts = a.starts.starts();
    let clouds = ratdyn::exec::Execution::default().map(&starts, |z0| trajectory(&params, *z0, a.transient, a.iters));
    let sidecar = render_scatter(&clouds, &spec, &a.image)?;
    let mut t = String::new();
    writeln!(t, "wrote {} ({}x{})", a.image.display(), sidecar.width, sidecar.height).unwrap();
    let r = sidecar.viewport;
    writeln!(
        t,
        "viewport re [{}, {}] im [{}, {}]",
        sig6(r.re_min),
        sig6(r.re_max),
        sig6(r.im_min),
        sig6(r.im_max)
    )
    .unwrap();
    writeln!(t, "points per seed {:?}", sidecar.per_seed_counts).unwrap();
    writeln!(t, "dropped at infinity {}, clipped {}", sidecar.dropped_infinite, sidecar.clipped).unwrap();
    Ok(Outcome {
        params: Some(params),
        table: t,
        outputs: value(&sidecar),
    })
}
