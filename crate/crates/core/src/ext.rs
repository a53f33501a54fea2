//! Points of the extended complex plane (the Riemann sphere).
//!
//! `ExtComplex` is either a finite complex number or the single point at
//! infinity. Finite values never carry NaN or infinite components: magnitudes
//! above [`OVERFLOW_LIMIT`] are promoted to `Infinity` on construction.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{DynError, Result};

pub type C64 = Complex64;

/// Magnitudes above this are treated as the point at infinity.
pub const OVERFLOW_LIMIT: f64 = 1e150;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtComplex {
    Finite(C64),
    Infinity,
}

pub const ZERO: ExtComplex = ExtComplex::Finite(C64::new(0.0, 0.0));

impl ExtComplex {
    /// Builds a finite point, rejecting NaN and promoting huge values.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::promote(C64::new(re, im))
    }

    /// Wraps a complex value, promoting overflow to `Infinity`.
    pub fn promote(z: C64) -> Result<Self> {
        if z.re.is_nan() || z.im.is_nan() {
            return Err(DynError::NonFiniteValue);
        }
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() > OVERFLOW_LIMIT {
            return Ok(ExtComplex::Infinity);
        }
        Ok(ExtComplex::Finite(z))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtComplex::Finite(z) if z.re == 0.0 && z.im == 0.0)
    }

    pub fn finite(&self) -> Option<C64> {
        match self {
            ExtComplex::Finite(z) => Some(*z),
            ExtComplex::Infinity => None,
        }
    }

    /// Euclidean modulus; `f64::INFINITY` for the point at infinity.
    pub fn modulus(&self) -> f64 {
        match self {
            ExtComplex::Finite(z) => z.norm(),
            ExtComplex::Infinity => f64::INFINITY,
        }
    }

    /// Lexicographic (re, im) order with `Infinity` last.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => Ordering::Equal,
            (ExtComplex::Infinity, _) => Ordering::Greater,
            (_, ExtComplex::Infinity) => Ordering::Less,
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => a
                .re
                .total_cmp(&b.re)
                .then_with(|| a.im.total_cmp(&b.im)),
        }
    }
}

impl From<C64> for ExtComplex {
    /// Panics on NaN components; use [`ExtComplex::promote`] for fallible input.
    fn from(z: C64) -> Self {
        ExtComplex::promote(z).expect("NaN component")
    }
}

/// Chordal distance on the Riemann sphere of diameter 1 scaled to [0, 2].
///
/// `d(z, w) = 2|z - w| / (sqrt(1 + |z|^2) sqrt(1 + |w|^2))` and
/// `d(z, inf) = 2 / sqrt(1 + |z|^2)`.
pub fn chordal_distance(a: &ExtComplex, b: &ExtComplex) -> f64 {
    match (a, b) {
        (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
        (ExtComplex::Finite(z), ExtComplex::Infinity) | (ExtComplex::Infinity, ExtComplex::Finite(z)) => {
            2.0 / 1f64.hypot(z.norm())
        }
        (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
            2.0 * (z - w).norm() / (1f64.hypot(z.norm()) * 1f64.hypot(w.norm()))
        }
    }
}

/// Complex division by Smith's algorithm; `None` when the divisor is zero.
///
/// Avoids the overflow and underflow of `|b|^2` that the textbook formula hits
/// for very large or very small divisors.
pub fn cdiv(a: C64, b: C64) -> Option<C64> {
    if b.re == 0.0 && b.im == 0.0 {
        return None;
    }
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let den = b.re + b.im * r;
        Some(C64::new((a.re + a.im * r) / den, (a.im - a.re * r) / den))
    } else {
        let r = b.re / b.im;
        let den = b.re * r + b.im;
        Some(C64::new((a.re * r + a.im) / den, (a.im * r - a.re) / den))
    }
}

/// Formats a complex number as `re+imi` with the given significant digits.
pub fn format_c64(z: C64, digits: usize) -> String {
    let p = digits.saturating_sub(1);
    let re = format!("{:.*e}", p, z.re);
    let im = format!("{:.*e}", p, z.im.abs());
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", tidy_exp(&re), sign, tidy_exp(&im))
}

/// Renders a float with `digits` significant digits in plain or scientific
/// notation, whichever a human would expect.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..=6).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        tidy_exp(&format!("{:.*e}", digits.saturating_sub(1), x))
    }
}

fn tidy_exp(s: &str) -> String {
    // "1.50000e0" -> "1.5", "2.00e-7" -> "2e-7"
    let (mantissa, exp) = match s.split_once('e') {
        Some(parts) => parts,
        None => return s.to_string(),
    };
    let exp: i32 = exp.parse().unwrap_or(0);
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    if exp == 0 {
        mantissa.to_string()
    } else if (-4..=5).contains(&exp) {
        let v: f64 = format!("{mantissa}e{exp}").parse().unwrap_or(0.0);
        format!("{v}")
    } else {
        format!("{mantissa}e{exp}")
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Infinity => write!(f, "inf"),
            ExtComplex::Finite(z) => {
                let digits = f.precision().unwrap_or(6);
                write!(f, "{}", format_c64(*z, digits))
            }
        }
    }
}

/// Parses one complex component in the `re+imi` grammar.
///
/// Accepted forms: `a+bi`, `a-bi`, `a`, `bi`, `+i`, `-i`, with optional
/// scientific notation in either part (`1.3e-6-6.2e-7i`). `j` is accepted in
/// place of `i`, and `inf` denotes the point at infinity.
pub fn parse_complex(s: &str) -> Result<ExtComplex> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(DynError::Parse("empty complex number".into()));
    }
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(ExtComplex::Infinity);
    }
    let err = || DynError::Parse(format!("malformed complex number '{s}'"));
    let real = |p: &str| -> Result<f64> {
        let v: f64 = p.parse().map_err(|_| err())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(err())
        }
    };
    let imag = |p: &str| -> Result<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => real(p),
        }
    };

    let bytes = t.as_bytes();
    let (body, has_i) = match bytes[bytes.len() - 1] {
        b'i' | b'j' | b'I' | b'J' => (&t[..t.len() - 1], true),
        _ => (t.as_str(), false),
    };
    if !has_i {
        let re = real(body)?;
        return ExtComplex::new(re, 0.0);
    }
    // Split at the last sign that is neither leading nor part of an exponent.
    let split = body
        .char_indices()
        .filter(|&(k, c)| {
            (c == '+' || c == '-') && k > 0 && !matches!(body.as_bytes()[k - 1], b'e' | b'E')
        })
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, imag(&body[k..])?),
        None => (0.0, imag(body)?),
    };
    ExtComplex::new(re, im)
}

impl FromStr for ExtComplex {
    type Err = DynError;
    fn from_str(s: &str) -> Result<Self> {
        parse_complex(s)
    }
}

impl Serialize for ExtComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtComplex::Infinity => serializer.serialize_str("inf"),
            ExtComplex::Finite(z) => {
                let mut st = serializer.serialize_struct("Complex", 2)?;
                st.serialize_field("re", &z.re)?;
                st.serialize_field("im", &z.im)?;
                st.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for ExtComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtVisitor;

        impl<'de> Visitor<'de> for ExtVisitor {
            type Value = ExtComplex;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("{\"re\": x, \"im\": y} or \"inf\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtComplex, E> {
                if v == "inf" {
                    Ok(ExtComplex::Infinity)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<ExtComplex, A::Error> {
                let mut re = None;
                let mut im = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "re" => re = Some(map.next_value::<f64>()?),
                        "im" => im = Some(map.next_value::<f64>()?),
                        _ => {
                            map.next_value::<de::IgnoredAny>()?;
                        }
                    }
                }
                let re = re.ok_or_else(|| de::Error::missing_field("re"))?;
                let im = im.ok_or_else(|| de::Error::missing_field("im"))?;
                ExtComplex::new(re, im).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_any(ExtVisitor)
    }
}

/// Serde adapter for plain complex numbers as `{"re": .., "im": ..}`.
pub mod c64_serde {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        Repr { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let r = Repr::deserialize(d)?;
        Ok(C64::new(r.re, r.im))
    }
}
