//! CSV and JSON emitters.
//!
//! Orbit CSV has columns `n,re,im`; the point at infinity is written as
//! `inf,inf`. JSON uses serde with shortest round-trip float formatting.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{DynError, Result};
use crate::ext::{ExtComplex, C64};
use crate::orbit::Orbit;

fn csv_err(e: csv::Error) -> DynError {
    DynError::Io(e.to_string())
}

pub fn write_points_csv<W: Write>(points: &[(usize, ExtComplex)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "re", "im"]).map_err(csv_err)?;
    for (n, z) in points {
        let (re, im) = match z {
            ExtComplex::Finite(c) => (c.re.to_string(), c.im.to_string()),
            ExtComplex::Infinity => ("inf".into(), "inf".into()),
        };
        w.write_record([n.to_string(), re, im]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_orbit_csv<W: Write>(orbit: &Orbit, out: W) -> Result<()> {
    write_points_csv(&orbit.samples(), out)
}

pub fn read_points_csv<R: Read>(input: R) -> Result<Vec<(usize, ExtComplex)>> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != 3 {
            return Err(DynError::Parse(format!("expected 3 columns, got {}", rec.len())));
        }
        let n: usize = rec[0].parse().map_err(|_| DynError::Parse(format!("bad index '{}'", &rec[0])))?;
        let z = if &rec[1] == "inf" && &rec[2] == "inf" {
            ExtComplex::Infinity
        } else {
            let num = |s: &str| s.parse::<f64>().map_err(|_| DynError::Parse(format!("bad number '{s}'")));
            ExtComplex::promote(C64::new(num(&rec[1])?, num(&rec[2])?))?
        };
        out.push((n, z));
    }
    Ok(out)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| DynError::Io(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| DynError::Parse(e.to_string()))
}
