use thiserror::Error;

/// Domain errors raised by the library. The variant names double as the
/// error names printed by the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynError {
    #[error("gamma is zero: the map degenerates to a Moebius transformation (opt in with degenerate mode)")]
    DegenerateMap,
    #[error("indeterminate value 0/0 at z = {re}{im:+}i with no known reduction")]
    IndeterminateValue { re: f64, im: f64 },
    #[error("non-finite parameter or point component")]
    NonFiniteValue,
    #[error("derivative requested at a pole or at infinity")]
    PoleDerivative,
    #[error("not a fixed point: residual {residual:e}")]
    NotAFixedPoint { residual: f64 },
    #[error("special case {0} has no closed-form fixed points")]
    WrongTag(&'static str),
    #[error("not a cycle: residual {residual:e} at index {index}")]
    NotACycle { index: usize, residual: f64 },
    #[error("empty cycle")]
    EmptyCycle,
    #[error("deflation of fixed points from the second-iterate roots failed: residual {residual:e}")]
    DeflationFailure { residual: f64 },
    #[error("orbit did not converge to the target")]
    NotConverged,
    #[error("too many pole hits: {skipped} of {window} samples skipped")]
    InsufficientSamples { skipped: usize, window: usize },
    #[error("too few points for box counting: {got} < {need}")]
    InsufficientPoints { got: usize, need: usize },
    #[error("invalid box-counting scales: {0}")]
    InvalidScales(String),
    #[error("fractal classification requires a positive Lyapunov exponent, got {0}")]
    NotChaotic(f64),
    #[error("nothing to plot: every point is at infinity")]
    EmptyPlot,
    #[error("invalid plot spec: {0}")]
    InvalidPlotSpec(String),
    #[error("invalid setting: {0}")]
    InvalidSetting(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl DynError {
    /// Stable error name, used on standard error by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            DynError::DegenerateMap => "DegenerateMap",
            DynError::IndeterminateValue { .. } => "IndeterminateValue",
            DynError::NonFiniteValue => "NonFiniteValue",
            DynError::PoleDerivative => "PoleDerivative",
            DynError::NotAFixedPoint { .. } => "NotAFixedPoint",
            DynError::WrongTag(_) => "WrongTag",
            DynError::NotACycle { .. } => "NotACycle",
            DynError::EmptyCycle => "EmptyCycle",
            DynError::DeflationFailure { .. } => "DeflationFailure",
            DynError::NotConverged => "NotConverged",
            DynError::InsufficientSamples { .. } => "InsufficientSamples",
            DynError::InsufficientPoints { .. } => "InsufficientPoints",
            DynError::InvalidScales(_) => "InvalidScales",
            DynError::NotChaotic(_) => "NotChaotic",
            DynError::EmptyPlot => "EmptyPlot",
            DynError::InvalidPlotSpec(_) => "InvalidPlotSpec",
            DynError::InvalidSetting(_) => "InvalidSetting",
            DynError::Parse(_) => "ParseError",
            DynError::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for DynError {
    fn from(e: std::io::Error) -> Self {
        DynError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, DynError>;
