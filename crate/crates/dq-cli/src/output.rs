//! Deterministic serialization: JSON with a fixed float format (17
//! significant digits) and stable key order, CSV for grid data.
//!
//! Identical inputs must produce byte-identical output, so floats never go
//! through the default shortest-round-trip formatter.

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::ser::Formatter;

/// serde_json formatter pinning every float to 17 significant digits.
pub struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize any value to the canonical JSON byte form (trailing newline).
pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}

/// Complex number in the wire format {"re": …, "im": …}.
#[derive(Serialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for JsonComplex {
    fn from(c: C64) -> Self {
        JsonComplex { re: c.re, im: c.im }
    }
}

/// One float in the CSV column format (17 significant digits, stable).
pub fn csv_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Grid dump: header `q,p,re,im`, row-major with p fastest.
pub fn grid_csv(g: &dq_core::grid::GridFunction) -> Vec<u8> {
    let mut out = String::from("q,p,re,im\n");
    let q_pts = g.spec.q_points();
    let p_pts = g.spec.p_points();
    for (iq, q) in q_pts.iter().enumerate() {
        for (ip, p) in p_pts.iter().enumerate() {
            let v = g.at(iq, ip);
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_float(*q),
                csv_float(*p),
                csv_float(v.re),
                csv_float(v.im)
            ));
        }
    }
    out.into_bytes()
}

/// 1-D dump: header `x,value`.
pub fn series_csv(x: &[f64], values: &[f64]) -> Vec<u8> {
    let mut out = String::from("x,value\n");
    for (x, v) in x.iter().zip(values) {
        out.push_str(&format!("{},{}\n", csv_float(*x), csv_float(*v)));
    }
    out.into_bytes()
}

/// Complex 1-D dump: header `x,re,im`.
pub fn complex_series_csv(x: &[f64], values: &[C64]) -> Vec<u8> {
    let mut out = String::from("x,re,im\n");
    for (x, v) in x.iter().zip(values) {
        out.push_str(&format!(
            "{},{},{}\n",
            csv_float(*x),
            csv_float(v.re),
            csv_float(v.im)
        ));
    }
    out.into_bytes()
}
