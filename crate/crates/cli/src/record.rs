//! Result records and their JSON / CSV encodings.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::Failure;

/// One comparison with its own tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Option<f64>,
    pub reference: f64,
    pub abs_dev: Option<f64>,
    pub rel_dev: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `|value − reference| ≤ tolerance·|reference|`; a missing
    /// or non-finite value fails.
    pub fn relative(name: &str, value: Option<f64>, reference: f64, tolerance: f64) -> Self {
        let value = value.filter(|v| v.is_finite());
        let abs_dev = value.map(|v| (v - reference).abs());
        let rel_dev = abs_dev.map(|d| if reference == 0.0 { d } else { d / reference.abs() });
        Self {
            name: name.into(),
            value,
            reference,
            abs_dev,
            rel_dev,
            tolerance,
            pass: rel_dev.is_some_and(|d| d <= tolerance),
        }
    }

    /// Passes when `value ≤ tolerance`.
    pub fn bound(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value: Some(value),
            reference: 0.0,
            abs_dev: Some(value.abs()),
            rel_dev: None,
            tolerance,
            pass: value.is_finite() && value <= tolerance,
        }
    }

    /// Passes when the two counts agree.
    pub fn exact(name: &str, value: usize, reference: usize) -> Self {
        let d = (value as f64 - reference as f64).abs();
        Self {
            name: name.into(),
            value: Some(value as f64),
            reference: reference as f64,
            abs_dev: Some(d),
            rel_dev: None,
            tolerance: 0.0,
            pass: value == reference,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleMeta {
    pub method: &'static str,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    /// Energy on the grid and on its halved-spacing refinement, before
    /// extrapolation.
    pub coarse_energy: f64,
    pub fine_energy: Option<f64>,
    pub node_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Target {
    #[serde(rename = "N")]
    pub dim: u32,
    pub l: u32,
    pub n_prime: Option<i64>,
    pub radial_index: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Required {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub index: usize,
    pub command: &'static str,
    pub family: String,
    pub label: Option<String>,
    pub coefficients: BTreeMap<&'static str, f64>,
    #[serde(rename = "N")]
    pub dim: u32,
    pub l: u32,
    pub n: u32,
    pub lambda: Option<i64>,
    pub target: Option<Target>,
    #[serde(rename = "analytic_E")]
    pub analytic_energy: Option<f64>,
    pub required_coefficient: Option<Required>,
    pub constraint_residual: Option<f64>,
    #[serde(rename = "oracle_E")]
    pub oracle_energy: Option<f64>,
    pub oracle: Option<OracleMeta>,
    pub residual: Option<f64>,
    pub values: BTreeMap<&'static str, Option<f64>>,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub timing_ms: f64,
}

impl ResultRecord {
    pub fn new(command: &'static str, family: &str, dim: u32, l: u32, n: u32) -> Self {
        Self {
            index: 0,
            command,
            family: family.into(),
            label: None,
            coefficients: BTreeMap::new(),
            dim,
            l,
            n,
            lambda: None,
            target: None,
            analytic_energy: None,
            required_coefficient: None,
            constraint_residual: None,
            oracle_energy: None,
            oracle: None,
            residual: None,
            values: BTreeMap::new(),
            checks: Vec::new(),
            pass: true,
            timing_ms: 0.0,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.pass = self.checks.iter().all(|c| c.pass);
    }

    /// Largest relative deviation among the checks.
    pub fn worst_rel_dev(&self) -> Option<f64> {
        self.checks.iter().filter_map(|c| c.rel_dev).reduce(f64::max)
    }
}

/// Writes every float with 17 significant digits.
struct SigFigs;

impl Formatter for SigFigs {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

fn float(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.16e}"),
        _ => String::new(),
    }
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::validation(format!("cannot write output: {e}"))
}

/// One JSON object per line.
pub fn write_json<W: Write>(records: &[ResultRecord], mut w: W) -> Result<(), Failure> {
    for r in records {
        let mut ser = serde_json::Serializer::with_formatter(&mut w, SigFigs);
        r.serialize(&mut ser).map_err(io_failure)?;
        w.write_all(b"\n").map_err(io_failure)?;
    }
    w.flush().map_err(io_failure)
}

pub const CSV_COLUMNS: [&str; 9] = ["family", "N", "l", "n", "analytic_E", "oracle_E", "rel_dev", "residual", "pass"];

pub fn write_csv<W: Write>(records: &[ResultRecord], w: W) -> Result<(), Failure> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_COLUMNS).map_err(io_failure)?;
    for r in records {
        out.write_record([
            r.family.clone(),
            r.dim.to_string(),
            r.l.to_string(),
            r.n.to_string(),
            float(r.analytic_energy),
            float(r.oracle_energy),
            float(r.worst_rel_dev()),
            float(r.residual),
            r.pass.to_string(),
        ])
        .map_err(io_failure)?;
    }
    out.flush().map_err(io_failure)
}
