use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ratdyn::ext::{parse_complex, C64};
use ratdyn::render::{PointStyle, Rect, Viewport};
use ratdyn::ExtComplex;

#[derive(Parser, Debug)]
#[command(name = "ratdyn", version, about = "Workbench for the rational map z -> (αz+β)/(γz²+δz)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fixed points with multipliers and stability classes.
    FixedPoints(FixedPointsArgs),
    /// Iterate one orbit and classify it.
    Orbit(OrbitArgs),
    /// Detect periodic cycles from several starts.
    Cycles(CyclesArgs),
    /// Lyapunov exponent and box-counting dimension.
    Chaos(ChaosArgs),
    /// Signature versus fractal-likeness over random parameter draws.
    ConjectureScan(ScanArgs),
    /// Compare multi-start orbits with the real-line prediction.
    VerifyCriteria(CriteriaArgs),
    /// Scatter plot of trajectories as a PPM image.
    Render(RenderArgs),
    /// Rerun a logged invocation and compare its outputs with the log.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    /// Run log written with --log.
    pub log: PathBuf,
    /// 1-based entry number; the last entry when absent.
    #[arg(long)]
    pub entry: Option<usize>,
}

/// The four raw components of `--params`; validated as a map later.
#[derive(Clone, Copy, Debug)]
pub struct ParamQuad(pub [C64; 4]);

pub fn parse_quad(s: &str) -> Result<ParamQuad, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("4 components required (α,β,γ,δ), got {}", parts.len()));
    }
    let mut c = [C64::new(0.0, 0.0); 4];
    for (slot, p) in c.iter_mut().zip(parts) {
        *slot = parse_complex(p)
            .map_err(|e| e.to_string())?
            .finite()
            .ok_or("parameters must be finite")?;
    }
    Ok(ParamQuad(c))
}

pub fn parse_point(s: &str) -> Result<ExtComplex, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

pub fn parse_viewport(s: &str) -> Result<Viewport, String> {
    if s == "auto" {
        return Ok(Viewport::Auto);
    }
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad number '{t}'")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [re_min, re_max, im_min, im_max] => Ok(Viewport::Fixed(Rect {
            re_min,
            re_max,
            im_min,
            im_max,
        })),
        _ => Err("expected 'auto' or re_min,re_max,im_min,im_max".into()),
    }
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct ParamSource {
    /// α,β,γ,δ as comma-separated complex numbers, e.g. "0.9+0.2i,1.1+1.3i,0.99+0.34i,0.76+0.75i".
    #[arg(long, value_parser = parse_quad, allow_hyphen_values = true)]
    pub params: Option<ParamQuad>,
    /// Named parameter set (see `ratdyn::presets::NAMES`).
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(ratdyn::presets::NAMES))]
    pub preset: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the machine-readable result as JSON to this path ('-' or no value for stdout).
    #[arg(long, num_args = 0..=1, default_missing_value = "-")]
    pub json: Option<PathBuf>,
    /// Append a run record (JSON lines) to this file.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct StartSource {
    /// Number of seeded random starts in [-2,2]².
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    /// Sampler seed.
    #[arg(long, env = "RATDYN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Explicit starts, comma-separated; overrides --seeds.
    #[arg(long, value_parser = parse_point, value_delimiter = ',', allow_hyphen_values = true)]
    pub z0: Vec<ExtComplex>,
}

impl StartSource {
    pub fn starts(&self) -> Vec<ExtComplex> {
        if self.z0.is_empty() {
            ratdyn::sampling::sample_z0(self.seed, self.seeds)
        } else {
            self.z0.clone()
        }
    }

    fn settings(&self, s: &mut Settings) {
        if self.z0.is_empty() {
            s.put("seeds", self.seeds);
            s.put("seed", self.seed);
        } else {
            s.put("z0", join_points(&self.z0));
        }
    }
}

fn join_points(z: &[ExtComplex]) -> String {
    z.iter().map(point_repr).collect::<Vec<_>>().join(",")
}

/// Round-trippable text form of a point.
pub fn point_repr(z: &ExtComplex) -> String {
    match z {
        ExtComplex::Infinity => "inf".into(),
        ExtComplex::Finite(c) => {
            let sign = if c.im.is_sign_negative() { '-' } else { '+' };
            format!("{:?}{}{:?}i", c.re, sign, c.im.abs())
        }
    }
}

/// Resolved flag values that determine a command's outputs, keyed by flag name.
#[derive(Default)]
pub struct Settings(pub BTreeMap<String, String>);

impl Settings {
    pub fn put(&mut self, k: &str, v: impl ToString) {
        self.0.insert(k.to_string(), v.to_string());
    }
}

#[derive(Args, Debug)]
pub struct FixedPointsArgs {
    #[command(flatten)]
    pub source: ParamSource,
    /// Tolerance on |f′| − 1 for the non-hyperbolic class.
    #[arg(long, default_value_t = ratdyn::fixed_points::DEFAULT_CLASS_TOL)]
    pub class_tol: f64,
    /// Relative tolerance for modulus comparisons in the signature.
    #[arg(long, default_value_t = ratdyn::plane_map::DEFAULT_EQ_TOL)]
    pub eq_tol: f64,
    /// Write the fixed-point table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

impl FixedPointsArgs {
    pub fn settings(&self) -> Settings {
        let mut s = Settings::default();
        s.put("class-tol", self.class_tol);
        s.put("eq-tol", self.eq_tol);
        s
    }
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub source: ParamSource,
    /// Initial value.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub z0: ExtComplex,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Chordal convergence tolerance.
    #[arg(long, default_value_t = ratdyn::orbit::DEFAULT_CONV_TOL)]
    pub tol: f64,
    /// Recording stride; automatic when absent.
    #[arg(long)]
    pub stride: Option<usize>,
    /// Chordal tolerance for a constant orbit.
    #[arg(long, default_value_t = ratdyn::fixed_points::DEFAULT_CLASS_TOL)]
    pub class_tol: f64,
    /// Write the recorded iterates as CSV (n,re,im).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

impl OrbitArgs {
    pub fn settings(&self) -> Settings {
        let mut s = Settings::default();
        s.put("z0", point_repr(&self.z0));
        s.put("max-iter", self.max_iter);
        s.put("tol", self.tol);
        if let Some(k) = self.stride {
            s.put("stride", k);
        }
        s.put("class-tol", self.class_tol);
        s
    }
}

#[derive(Args, Debug)]
pub struct CyclesArgs {
    #[command(flatten)]
    pub source: ParamSource,
    #[command(flatten)]
    pub starts: StartSource,
    #[arg(long, default_value_t = ratdyn::cycles::DEFAULT_N_TRANSIENT)]
    pub transient: usize,
    #[arg(long, default_value_t = ratdyn::cycles::DEFAULT_N_PROBE)]
    pub probe: usize,
    /// Largest period searched (at most 256).
    #[arg(long, default_value_t = ratdyn::orbit::MAX_PERIOD, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..=256))]
    pub max_period: usize,
    #[arg(long, default_value_t = ratdyn::cycles::DEFAULT_MATCH_TOL)]
    pub match_tol: f64,
    #[command(flatten)]
    pub out: Output,
}

impl CyclesArgs {
    pub fn settings(&self) -> Settings {
        let mut s = Settings::default();
        self.starts.settings(&mut s);
        s.put("transient", self.transient);
        s.put("probe", self.probe);
        s.put("max-period", self.max_period);
        s.put("match-tol", self.match_tol);
        s
    }
}

#[derive(Args, Debug)]
pub struct ChaosArgs {
    #[command(flatten)]
    pub source: ParamSource,
    /// Explicit starts; the fixed reference set of ten starts when absent.
    #[arg(long, value_parser = parse_point, value_delimiter = ',', allow_hyphen_values = true)]
    pub z0: Vec<ExtComplex>,
    #[arg(long, default_value_t = ratdyn::chaos::DEFAULT_N_TRANSIENT)]
    pub transient: usize,
    #[arg(long, default_value_t = ratdyn::chaos::DEFAULT_N_SAMPLE)]
    pub samples: usize,
    #[arg(long, default_value_t = ratdyn::plane_map::DEFAULT_EQ_TOL)]
    pub eq_tol: f64,
    #[command(flatten)]
    pub out: Output,
}

impl ChaosArgs {
    pub fn settings(&self) -> Settings {
        let mut s = Settings::default();
        if !self.z0.is_empty() {
            s.put("z0", join_points(&self.z0));
        }
        s.put("transient", self.transient);
        s.put("samples", self.samples);
        s.put("eq-tol", self.eq_tol);
        s
    }
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Number of random parameter draws.
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, env = "RATDYN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Prepend the four chaotic reference rows to the draws.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub table_rows: bool,
    #[arg(long, default_value_t = ratdyn::chaos::DEFAULT_N_TRANSIENT)]
    pub transient: usize,
    #[arg(long, default_value_t = ratdyn::chaos::DEFAULT_N_SAMPLE)]
    pub samples: usize,
    #[arg(long, default_value_t = ratdyn::plane_map::DEFAULT_EQ_TOL)]
    pub eq_tol: f64,
    /// Write the full scan report (every draw with its chaos report) as JSON.
    #[arg(long = "out")]
    pub full_report: Option<PathBuf>,
    /// Write one CSV row per draw.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

impl ScanArgs {
    pub fn settings(&self) -> Settings {
        let mut s = Settings::default();
        s.put("n", self.n);
        s.put("seed", self.seed);
        s.put("table-rows", self.table_rows);
        s.put("transient", self.transient);
        s.put("samples", self.samples);
        s.put("eq-tol", self.eq_tol);
        s
    }
}

#[derive(Args, Debug)]
pub struct CriteriaArgs {
    #[command(flatten)]
    pub source: ParamSource,
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    #[arg(long, env = "RATDYN_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = ratdyn::orbit::DEFAULT_CONV_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = ratdyn::plane_map::DEFAULT_EQ_TOL)]
    pub eq_tol: f64,
    /// Chordal tolerance for "constant" orbits.
    #[arg(long, default_value_t = 1e-9)]
    pub class_tol: f64,
    #[command(flatten)]
    pub out: Output,
}

impl CriteriaArgs {
    pub fn settings(&self) -> Settings {
        let mut s = Settings::default();
        s.put("seeds", self.seeds);
        s.put("seed", self.seed);
        s.put("max-iter", self.max_iter);
        s.put("tol", self.tol);
        s.put("eq-tol", self.eq_tol);
        s.put("class-tol", self.class_tol);
        s
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Style {
    Pixel,
    Square3,
}

impl From<Style> for PointStyle {
    fn from(s: Style) -> Self {
        match s {
            Style::Pixel => PointStyle::Pixel,
            Style::Square3 => PointStyle::Square3,
        }
    }
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[command(flatten)]
    pub source: ParamSource,
    #[command(flatten)]
    pub starts: StartSource,
    /// Iterates discarded before plotting.
    #[arg(long, default_value_t = 1_000)]
    pub transient: usize,
    /// Iterates plotted per start.
    #[arg(long, default_value_t = 10_000)]
    pub iters: usize,
    #[arg(long, default_value_t = 800)]
    pub width: usize,
    #[arg(long, default_value_t = 800)]
    pub height: usize,
    #[arg(long, value_enum, default_value_t = Style::Pixel)]
    pub style: Style,
    /// 'auto' or re_min,re_max,im_min,im_max.
    #[arg(long, default_value = "auto", value_parser = parse_viewport, allow_hyphen_values = true)]
    pub viewport: Viewport,
    /// Image path; the sidecar goes to <path>.json.
    #[arg(long = "out")]
    pub image: PathBuf,
    #[command(flatten)]
    pub out: Output,
}

impl RenderArgs {
    pub fn settings(&self) -> Settings {
        let mut s = Settings::default();
        self.starts.settings(&mut s);
        s.put("out", self.image.display());
        s.put("transient", self.transient);
        s.put("iters", self.iters);
        s.put("width", self.width);
        s.put("height", self.height);
        s.put(
            "style",
            match self.style {
                Style::Pixel => "pixel",
                Style::Square3 => "square3",
            },
        );
        s.put(
            "viewport",
            match self.viewport {
                Viewport::Auto => "auto".to_string(),
                Viewport::Fixed(r) => format!("{:?},{:?},{:?},{:?}", r.re_min, r.re_max, r.im_min, r.im_max),
            },
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_arity() {
        assert!(parse_quad("1+0i").unwrap_err().contains("4 components"));
        assert!(parse_quad("1,2,3,4").is_ok());
        assert!(parse_quad("1,2,inf,4").is_err());
    }

    #[test]
    fn point_repr_round_trips() {
        for z in [ExtComplex::Infinity, ExtComplex::Finite(C64::new(-0.1, -1e-300)), ExtComplex::Finite(C64::new(3.0, 0.0))] {
            assert_eq!(parse_point(&point_repr(&z)).unwrap(), z);
        }
    }

    #[test]
    fn viewport_forms() {
        assert_eq!(parse_viewport("auto").unwrap(), Viewport::Auto);
        assert!(matches!(parse_viewport("-2,2,-1,1").unwrap(), Viewport::Fixed(r) if r.re_min == -2.0));
        assert!(parse_viewport("1,2").is_err());
    }
}
