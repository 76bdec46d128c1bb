//! CSV and JSON writers for curves and estimates.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::engine::{CldCurve, GammaCurve};
use crate::error::Error;
use crate::oracle::McEstimate;

/// Header lines written as `# key: value` comments ahead of the CSV body.
pub type Header = Vec<(String, String)>;

fn header_text(header: &Header) -> String {
    header.iter().map(|(k, v)| format!("# {k}: {v}\n")).collect()
}

fn num(x: f64) -> String {
    format!("{x:.17e}")
}

/// Columns r, value, stderr, method.
pub fn curve_csv(curve: &CldCurve, header: &Header) -> String {
    let mut s = header_text(header);
    s.push_str("r,value,stderr,method\n");
    for i in 0..curve.r.len() {
        let _ = writeln!(s, "{},{},{},{}", num(curve.r[i]), num(curve.values[i]), num(curve.errors[i]), curve.methods[i].as_str());
    }
    s
}

pub fn estimate_csv(est: &McEstimate, method: &str, header: &Header) -> String {
    let mut s = header_text(header);
    s.push_str("r,value,stderr,method\n");
    for i in 0..est.r.len() {
        let _ = writeln!(s, "{},{},{},{method}", num(est.r[i]), num(est.mean[i]), num(est.stderr[i]));
    }
    s
}

/// Columns r, value, derivative, method (value = γ, derivative = γ′).
pub fn gamma_csv(g: &GammaCurve, header: &Header) -> String {
    let mut s = header_text(header);
    s.push_str("r,value,derivative,method\n");
    for i in 0..g.r.len() {
        let _ = writeln!(s, "{},{},{},reconstructed", num(g.r[i]), num(g.gamma[i]), num(g.dgamma[i]));
    }
    s
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    header: std::collections::BTreeMap<&'a str, &'a str>,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON of `body` with the header as a `header` object.
pub fn to_json<T: Serialize>(body: &T, header: &Header) -> Result<String, Error> {
    let header = header.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    Ok(serde_json::to_string_pretty(&Wrapped { header, body })?)
}

/// Write via a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}
