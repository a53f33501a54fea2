//! The map family `f(z) = (αz + β) / (γz² + δz)` on the extended plane.
//!
//! Parameters are validated and inspected for removable singularities when a
//! [`MapParams`] is built. When `βγ = αδ` the numerator and denominator share
//! the factor `γz + δ` and the map is stored in its reduced form `k / z` with
//! `k = α/γ` (this covers the α=β, γ=δ family and the γ=α, δ=β family). When
//! `β = 0` the common factor is `z` and the map reduces to `α / (γz + δ)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DynError, Result};
use crate::ext::{c64_serde, cdiv, parse_complex, ExtComplex, C64, ZERO};

/// Relative tolerance used to detect removable singularities at load time.
pub const REDUCTION_TOL: f64 = 1e-12;

/// Default relative tolerance for declaring two moduli equal.
pub const DEFAULT_EQ_TOL: f64 = 1e-9;

/// Default relative tolerance for special-case detection.
pub const DEFAULT_MATCH_TOL: f64 = 1e-9;

/// Algebraic reduction applied when numerator and denominator share a factor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reduction {
    None,
    /// `f(z) = k / z`
    Reciprocal {
        #[serde(with = "c64_serde")]
        k: C64,
    },
    /// `β = 0`: `f(z) = α / (γz + δ)`
    ZeroBeta,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct MapParams {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
    degenerate: bool,
    reduction: Reduction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamWarning {
    /// β = 0: z = 0 is a root of the fixed-point cubic but not a fixed point.
    ZeroBeta,
}

impl MapParams {
    /// Validates a parameter quadruple. γ = 0 is rejected with `DegenerateMap`.
    pub fn new(alpha: C64, beta: C64, gamma: C64, delta: C64) -> Result<Self> {
        Self::build(alpha, beta, gamma, delta, false)
    }

    /// Like [`MapParams::new`] but accepts γ = 0 (the Moebius family).
    pub fn new_degenerate(alpha: C64, beta: C64, gamma: C64, delta: C64) -> Result<Self> {
        Self::build(alpha, beta, gamma, delta, true)
    }

    /// Convenience constructor from `(re, im)` pairs.
    pub fn from_parts(parts: [(f64, f64); 4]) -> Result<Self> {
        let [a, b, g, d] = parts.map(|(re, im)| C64::new(re, im));
        Self::new(a, b, g, d)
    }

    fn build(alpha: C64, beta: C64, gamma: C64, delta: C64, degenerate: bool) -> Result<Self> {
        for c in [alpha, beta, gamma, delta] {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(DynError::NonFiniteValue);
            }
        }
        let gamma_zero = gamma.re == 0.0 && gamma.im == 0.0;
        if gamma_zero && !degenerate {
            return Err(DynError::DegenerateMap);
        }
        let reduction = if gamma_zero {
            Reduction::None
        } else if beta.re == 0.0 && beta.im == 0.0 {
            Reduction::ZeroBeta
        } else {
            let lhs = beta * gamma;
            let rhs = alpha * delta;
            let scale = lhs.norm() + rhs.norm();
            if (lhs - rhs).norm() <= REDUCTION_TOL * scale {
                Reduction::Reciprocal {
                    k: cdiv(alpha, gamma).expect("gamma nonzero"),
                }
            } else {
                Reduction::None
            }
        };
        Ok(MapParams {
            alpha,
            beta,
            gamma,
            delta,
            degenerate,
            reduction,
        })
    }

    pub fn reduction(&self) -> Reduction {
        self.reduction
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn warnings(&self) -> Vec<ParamWarning> {
        let mut w = Vec::new();
        if self.beta == C64::new(0.0, 0.0) {
            w.push(ParamWarning::ZeroBeta);
        }
        w
    }

    /// The same map with all four parameters multiplied by `c`.
    pub fn scaled(&self, c: C64) -> Result<Self> {
        Self::build(
            self.alpha * c,
            self.beta * c,
            self.gamma * c,
            self.delta * c,
            self.degenerate,
        )
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    fn gamma_is_zero(&self) -> bool {
        self.gamma.re == 0.0 && self.gamma.im == 0.0
    }
}

impl fmt::Display for MapParams {
    /// Comma-separated quadruple in the parameter grammar, round-trippable.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .as_array()
            .iter()
            .map(|c| {
                let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                format!("{:?}{}{:?}i", c.re, sign, c.im.abs())
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for MapParams {
    type Err = DynError;

    /// Parses `"α,β,γ,δ"` where each component is in the `re±imi` grammar.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(DynError::Parse(format!(
                "expected 4 comma-separated complex components, got {}",
                parts.len()
            )));
        }
        let mut c = [C64::new(0.0, 0.0); 4];
        for (slot, p) in c.iter_mut().zip(parts) {
            *slot = parse_complex(p)?
                .finite()
                .ok_or_else(|| DynError::Parse("parameters must be finite".into()))?;
        }
        MapParams::new(c[0], c[1], c[2], c[3])
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    #[serde(with = "c64_serde")]
    alpha: C64,
    #[serde(with = "c64_serde")]
    beta: C64,
    #[serde(with = "c64_serde")]
    gamma: C64,
    #[serde(with = "c64_serde")]
    delta: C64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    degenerate: bool,
}

impl TryFrom<ParamsRepr> for MapParams {
    type Error = DynError;
    fn try_from(r: ParamsRepr) -> Result<Self> {
        MapParams::build(r.alpha, r.beta, r.gamma, r.delta, r.degenerate)
    }
}

impl From<MapParams> for ParamsRepr {
    fn from(p: MapParams) -> Self {
        ParamsRepr {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            delta: p.delta,
            degenerate: p.degenerate,
        }
    }
}

fn is_zero(z: C64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

fn quotient(num: C64, den: C64, at: C64) -> Result<ExtComplex> {
    match cdiv(num, den) {
        Some(q) => ExtComplex::promote(q),
        None if is_zero(num) => Err(DynError::IndeterminateValue { re: at.re, im: at.im }),
        None => Ok(ExtComplex::Infinity),
    }
}

/// Evaluates the map at a point of the extended plane.
///
/// Poles map to `Infinity`, `Infinity` maps to 0, and removable points are
/// evaluated through the reduction chosen at load time.
pub fn eval_map(params: &MapParams, z: ExtComplex) -> Result<ExtComplex> {
    if params.gamma_is_zero() && !params.degenerate {
        return Err(DynError::DegenerateMap);
    }
    let (a, b, g, d) = (params.alpha, params.beta, params.gamma, params.delta);
    let z = match z {
        ExtComplex::Infinity => {
            return if params.gamma_is_zero() {
                // (αz + β)/(δz) -> α/δ
                quotient(a, d, C64::new(f64::INFINITY, 0.0))
            } else {
                Ok(ZERO)
            };
        }
        ExtComplex::Finite(z) => z,
    };
    match params.reduction {
        Reduction::Reciprocal { k } => quotient(k, z, z),
        Reduction::ZeroBeta => quotient(a, g * z + d, z),
        Reduction::None => {
            if z.norm() >= 1.0 {
                // (α + β/z) / (γz + δ): no z² term to overflow
                let w = cdiv(C64::new(1.0, 0.0), z).expect("nonzero");
                quotient(a + b * w, g * z + d, z)
            } else {
                quotient(a * z + b, z * (g * z + d), z)
            }
        }
    }
}

/// Derivative `f'(z) = -(αγz² + 2βγz + βδ) / (z² (γz + δ)²)`.
///
/// This is the quotient rule with the numerator expanded and simplified, so
/// no difference of nearly equal products is formed.
pub fn eval_derivative(params: &MapParams, z: ExtComplex) -> Result<C64> {
    if params.gamma_is_zero() && !params.degenerate {
        return Err(DynError::DegenerateMap);
    }
    let z = z.finite().ok_or(DynError::PoleDerivative)?;
    let (a, b, g, d) = (params.alpha, params.beta, params.gamma, params.delta);
    let div = |n: C64, m: C64| cdiv(n, m).ok_or(DynError::PoleDerivative);
    match params.reduction {
        Reduction::Reciprocal { k } => {
            let q = div(-k, z)?;
            div(q, z)
        }
        Reduction::ZeroBeta => {
            let s = g * z + d;
            let q = div(-(a * g), s)?;
            div(q, s)
        }
        Reduction::None => {
            let s = g * z + d;
            if is_zero(z) || is_zero(s) {
                return Err(DynError::PoleDerivative);
            }
            if z.norm() >= 1.0 {
                let w = div(C64::new(1.0, 0.0), z)?;
                let num = -(a * g + b * g * w * 2.0 + b * d * w * w);
                div(div(num, s)?, s)
            } else {
                let num = -(a * g * z * z + b * g * z * 2.0 + b * d);
                let q = div(div(num, s)?, s)?;
                div(div(q, z)?, z)
            }
        }
    }
}

/// Singular points of the unreduced map: `{0, -δ/γ}`, deduplicated when δ = 0.
///
/// For maps that reduce at load time `-δ/γ` is removable, but it is still
/// listed here since it is a zero of the unreduced denominator.
pub fn singular_points(params: &MapParams) -> Result<Vec<ExtComplex>> {
    if params.gamma_is_zero() {
        return Err(DynError::DegenerateMap);
    }
    let mut out = vec![ZERO];
    if !is_zero(params.delta) {
        let p = cdiv(-params.delta, params.gamma).expect("gamma nonzero");
        out.push(ExtComplex::promote(p)?);
    }
    Ok(out)
}

/// Result of comparing two moduli.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cmp {
    LT,
    EQ,
    GT,
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Cmp::LT => "<",
            Cmp::EQ => "=",
            Cmp::GT => ">",
        };
        f.write_str(s)
    }
}

/// Compares two non-negative moduli with relative tolerance `eq_tol`.
pub fn compare_moduli(x: f64, y: f64, eq_tol: f64) -> Cmp {
    let scale = x.max(y);
    if (x - y).abs() < eq_tol * scale || scale == 0.0 {
        Cmp::EQ
    } else if x < y {
        Cmp::LT
    } else {
        Cmp::GT
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moduli {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub alpha_plus_beta: f64,
    pub gamma_plus_delta: f64,
}

/// Comparisons |α| vs |γ|, |β| vs |δ| and |α+β| vs |γ+δ|.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionSignature {
    pub cmp_ag: Cmp,
    pub cmp_bd: Cmp,
    pub cmp_sum: Cmp,
    pub eq_tol: f64,
    pub moduli: Moduli,
}

impl ConditionSignature {
    pub fn triple(&self) -> (Cmp, Cmp, Cmp) {
        (self.cmp_ag, self.cmp_bd, self.cmp_sum)
    }

    pub fn is_all(&self, c: Cmp) -> bool {
        self.cmp_ag == c && self.cmp_bd == c && self.cmp_sum == c
    }
}

impl fmt::Display for ConditionSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|a|{}|g|, |b|{}|d|, |a+b|{}|g+d|",
            self.cmp_ag, self.cmp_bd, self.cmp_sum
        )
    }
}

pub fn condition_signature(params: &MapParams, eq_tol: f64) -> ConditionSignature {
    let m = Moduli {
        alpha: params.alpha.norm(),
        beta: params.beta.norm(),
        gamma: params.gamma.norm(),
        delta: params.delta.norm(),
        alpha_plus_beta: (params.alpha + params.beta).norm(),
        gamma_plus_delta: (params.gamma + params.delta).norm(),
    };
    ConditionSignature {
        cmp_ag: compare_moduli(m.alpha, m.gamma, eq_tol),
        cmp_bd: compare_moduli(m.beta, m.delta, eq_tol),
        cmp_sum: compare_moduli(m.alpha_plus_beta, m.gamma_plus_delta, eq_tol),
        eq_tol,
        moduli: m,
    }
}

/// Special parameter families with known reductions or closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialCaseTag {
    General,
    /// α = β, γ = δ: the map reduces to α/(γz).
    CaseA,
    /// α = −β, γ = δ.
    CaseB,
    /// γ = α, δ = β: the map reduces to 1/z.
    CaseC,
    /// γ = β, δ = α.
    CaseD,
}

impl SpecialCaseTag {
    pub fn name(&self) -> &'static str {
        match self {
            SpecialCaseTag::General => "General",
            SpecialCaseTag::CaseA => "CaseA",
            SpecialCaseTag::CaseB => "CaseB",
            SpecialCaseTag::CaseC => "CaseC",
            SpecialCaseTag::CaseD => "CaseD",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialCase {
    pub tag: SpecialCaseTag,
    pub match_tol: f64,
    /// `k` of the reduced map `z ↦ k/z` (Case A: α/γ, Case C: 1).
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_c64")]
    pub reduced_k: Option<C64>,
}

impl SpecialCase {
    pub fn reduced_description(&self) -> Option<String> {
        match self.tag {
            SpecialCaseTag::CaseA => Some("z -> alpha/(gamma z)".into()),
            SpecialCaseTag::CaseC => Some("z -> 1/z".into()),
            _ => None,
        }
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

fn approx_eq(a: C64, b: C64, tol: f64) -> bool {
    let scale = a.norm().max(b.norm());
    (a - b).norm() <= tol * scale
}

/// Tags the parameter family. The first matching case in the order A, B, C, D
/// wins.
pub fn detect_special_case(params: &MapParams, match_tol: f64) -> SpecialCase {
    let (a, b, g, d) = (params.alpha, params.beta, params.gamma, params.delta);
    let tag = if approx_eq(a, b, match_tol) && approx_eq(g, d, match_tol) {
        SpecialCaseTag::CaseA
    } else if approx_eq(a, -b, match_tol) && approx_eq(g, d, match_tol) {
        SpecialCaseTag::CaseB
    } else if approx_eq(g, a, match_tol) && approx_eq(d, b, match_tol) {
        SpecialCaseTag::CaseC
    } else if approx_eq(g, b, match_tol) && approx_eq(d, a, match_tol) {
        SpecialCaseTag::CaseD
    } else {
        SpecialCaseTag::General
    };
    let reduced_k = match tag {
        SpecialCaseTag::CaseA => cdiv(a, g),
        SpecialCaseTag::CaseC => Some(C64::new(1.0, 0.0)),
        _ => None,
    };
    SpecialCase {
        tag,
        match_tol,
        reduced_k,
    }
}
