//! Run description: the flat key-value form shared by flags and config
//! files, and its validated counterpart.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use susy_radial::duality::{check_lambda, lambda_bounds};
use susy_radial::oracle::{Method, MIN_GRID_POINTS};
use susy_radial::{KratzerPotential, PseudoharmonicPotential, QuantumFrame};

use crate::Failure;

/// Every setting of a run, all optional. Field names double as flag names
/// and config-file keys.
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    /// Subcommand recorded in config files; the command line always wins.
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,

    /// kratzer | gk | v1 | v2 | pseudoharmonic
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,

    #[arg(long = "A", allow_hyphen_values = true)]
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[arg(long = "B", allow_hyphen_values = true)]
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[arg(long = "A1", allow_hyphen_values = true)]
    #[serde(rename = "A1", default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<f64>,
    #[arg(long = "A2", allow_hyphen_values = true)]
    #[serde(rename = "A2", default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<f64>,
    #[arg(long = "A3", allow_hyphen_values = true)]
    #[serde(rename = "A3", default, skip_serializing_if = "Option::is_none")]
    pub a3: Option<f64>,
    #[arg(long = "A4", allow_hyphen_values = true)]
    #[serde(rename = "A4", default, skip_serializing_if = "Option::is_none")]
    pub a4: Option<f64>,
    #[arg(long = "B1", allow_hyphen_values = true)]
    #[serde(rename = "B1", default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<f64>,
    #[arg(long = "B2", allow_hyphen_values = true)]
    #[serde(rename = "B2", default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<f64>,
    #[arg(long = "B3", allow_hyphen_values = true)]
    #[serde(rename = "B3", default, skip_serializing_if = "Option::is_none")]
    pub b3: Option<f64>,
    #[arg(long = "B4", allow_hyphen_values = true)]
    #[serde(rename = "B4", default, skip_serializing_if = "Option::is_none")]
    pub b4: Option<f64>,
    /// Pseudoharmonic well depth (with --r0) or constant shift (with --Btil/--Atil).
    #[arg(long = "V0", allow_hyphen_values = true)]
    #[serde(rename = "V0", default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
    #[arg(long = "r0")]
    #[serde(rename = "r0", default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[arg(long = "Btil")]
    #[serde(rename = "Btil", default, skip_serializing_if = "Option::is_none")]
    pub b_tilde: Option<f64>,
    #[arg(long = "Atil")]
    #[serde(rename = "Atil", default, skip_serializing_if = "Option::is_none")]
    pub a_tilde: Option<f64>,

    /// Spatial dimension.
    #[arg(long = "N", allow_hyphen_values = true)]
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<i64>,
    /// Angular momentum.
    #[arg(long = "l", allow_hyphen_values = true)]
    #[serde(rename = "l", default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<i64>,
    /// States: `3`, `0..3` (inclusive) or `0,2,5`.
    #[arg(long = "n")]
    #[serde(rename = "n", default, skip_serializing_if = "Option::is_none")]
    pub states: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<i64>,

    /// Also solve numerically (spectrum, verify-map).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
    /// fd | numerov
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[arg(long = "grid-points")]
    #[serde(rename = "grid-points", default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rmin: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rmax: Option<f64>,
    /// Relative tolerance for the pass/fail verdict.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,

    /// oracle-compare batch: v1-random | v2-sign | pseudoharmonic-ladder
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch: Option<String>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Worker threads; 0 uses every core.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    /// json | csv
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        RawSpec { $($f: $top.$f.or($base.$f)),* }
    };
}

impl RawSpec {
    /// `self` with every field set in `top` replaced.
    pub fn overlaid(self, top: RawSpec) -> RawSpec {
        let base = self;
        overlay!(base, top; command, family, a, b, a1, a2, a3, a4, b1, b2, b3, b4, v0, r0, b_tilde,
            a_tilde, dim, ell, states, lambda, oracle, method, grid_points, rmin, rmax, tol, batch,
            count, seed, jobs, format, out)
    }

    pub fn from_toml(text: &str) -> Result<Self, Failure> {
        toml::from_str(text).map_err(|e| Failure::validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat spec serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    VerifyMap,
    OracleCompare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::VerifyMap => "verify-map",
            Command::OracleCompare => "oracle-compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Kratzer(KratzerPotential),
    /// `ρ² + 4A/ρ²`.
    Gk { a: f64 },
    /// `A1/r + A2/r² + A3/r³ + A4/r⁴`; `A1` is derived when absent.
    V1 { a1: Option<f64>, a2: f64, a3: f64, a4: f64 },
    /// `B1 r² + B2/r² + B3/r⁴ + B4/r⁶`; `B2` is derived when absent.
    V2 { b1: f64, b2: Option<f64>, b3: f64, b4: f64 },
    Pseudoharmonic(PseudoharmonicPotential),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Kratzer(_) => "kratzer",
            Family::Gk { .. } => "gk",
            Family::V1 { .. } => "v1",
            Family::V2 { .. } => "v2",
            Family::Pseudoharmonic(_) => "pseudoharmonic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Batch {
    V1Random,
    V2Sign,
    PseudoharmonicLadder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOverrides {
    pub points: Option<usize>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
}

impl GridOverrides {
    pub fn any(&self) -> bool {
        self.points.is_some() || self.r_min.is_some() || self.r_max.is_some()
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub family: Option<Family>,
    pub frame: QuantumFrame,
    pub states: Vec<u32>,
    pub lambdas: Vec<i64>,
    pub oracle: bool,
    pub method: Method,
    pub grid: GridOverrides,
    pub tolerance: f64,
    pub batch: Option<Batch>,
    pub count: usize,
    pub seed: u64,
    pub jobs: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub fn parse_states(text: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::validation(format!("cannot parse state list '{text}'"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    let states = if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        text.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if states.is_empty() {
        return Err(bad());
    }
    Ok(states)
}

fn need(value: Option<f64>, flag: &str, family: &str) -> Result<f64, Failure> {
    let v = value.ok_or_else(|| Failure::validation(format!("--{flag} is required for --family {family}")))?;
    if !v.is_finite() {
        return Err(Failure::validation(format!("--{flag} must be finite, got {v}")));
    }
    Ok(v)
}

fn positive(v: f64, flag: &str) -> Result<f64, Failure> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Failure::validation(format!("--{flag} must be > 0, got {v}")))
    }
}

fn family_from(raw: &RawSpec) -> Result<Option<Family>, Failure> {
    let Some(name) = raw.family.as_deref() else {
        return Ok(None);
    };
    let f = match name {
        "kratzer" => Family::Kratzer(
            KratzerPotential::new(need(raw.a, "A", name)?, need(raw.b, "B", name)?).map_err(Failure::from_core)?,
        ),
        "gk" => {
            let a = need(raw.a, "A", name)?;
            PseudoharmonicPotential::goldman_krivchenkov(a).map_err(Failure::from_core)?;
            Family::Gk { a }
        }
        "v1" => Family::V1 {
            a1: raw.a1,
            a2: need(raw.a2, "A2", name)?,
            a3: need(raw.a3, "A3", name)?,
            a4: positive(need(raw.a4, "A4", name)?, "A4")?,
        },
        "v2" => Family::V2 {
            b1: positive(need(raw.b1, "B1", name)?, "B1")?,
            b2: raw.b2,
            b3: need(raw.b3, "B3", name)?,
            b4: positive(need(raw.b4, "B4", name)?, "B4")?,
        },
        "pseudoharmonic" => {
            let p = match (raw.r0, raw.b_tilde, raw.a_tilde) {
                (Some(r0), None, None) => PseudoharmonicPotential::from_well(need(raw.v0, "V0", name)?, r0),
                (None, Some(b), a) => PseudoharmonicPotential::from_coefficients(b, a.unwrap_or(0.0), raw.v0.unwrap_or(0.0)),
                _ => {
                    return Err(Failure::validation(
                        "pseudoharmonic needs either --V0 with --r0, or --Btil [--Atil] [--V0]",
                    ))
                }
            };
            Family::Pseudoharmonic(p.map_err(Failure::from_core)?)
        }
        other => {
            return Err(Failure::validation(format!(
                "unknown family '{other}' (kratzer, gk, v1, v2, pseudoharmonic)"
            )))
        }
    };
    Ok(Some(f))
}

impl RunSpec {
    pub fn validate(command: Command, raw: &RawSpec) -> Result<Self, Failure> {
        let batch = match raw.batch.as_deref() {
            None => None,
            Some(_) if command != Command::OracleCompare => {
                return Err(Failure::validation("--batch is only valid for oracle-compare"))
            }
            Some("v1-random") => Some(Batch::V1Random),
            Some("v2-sign") => Some(Batch::V2Sign),
            Some("pseudoharmonic-ladder") => Some(Batch::PseudoharmonicLadder),
            Some(other) => {
                return Err(Failure::validation(format!(
                    "unknown batch '{other}' (v1-random, v2-sign, pseudoharmonic-ladder)"
                )))
            }
        };
        let family = family_from(raw)?;
        let needs_family = !matches!(batch, Some(Batch::V1Random | Batch::V2Sign));
        if needs_family && family.is_none() {
            return Err(Failure::validation("--family is required"));
        }
        if batch == Some(Batch::PseudoharmonicLadder) && !matches!(family, Some(Family::Pseudoharmonic(_) | Family::Gk { .. })) {
            return Err(Failure::validation("pseudoharmonic-ladder needs --family pseudoharmonic or gk"));
        }
        let dim = raw.dim.unwrap_or(3);
        let ell = raw.ell.unwrap_or(0);
        let frame = QuantumFrame::new(dim, ell).map_err(Failure::from_core)?;

        let default_states = match command {
            Command::VerifyMap => format!("{}..{}", ell + 1, ell + 4),
            _ if batch == Some(Batch::PseudoharmonicLadder) => "0..3".to_string(),
            _ => "0".to_string(),
        };
        let states = parse_states(raw.states.as_deref().unwrap_or(&default_states))?;
        if let Some(Family::V1 { .. } | Family::V2 { .. }) = family {
            if command != Command::VerifyMap && states != [0] {
                return Err(Failure::validation(
                    "only the ground state (n = 0) is closed-form for the quasi-exactly solvable families",
                ));
            }
        }

        let lambdas = match (command, raw.lambda) {
            (Command::VerifyMap, Some(l)) => {
                check_lambda(&frame, l).map_err(Failure::from_core)?;
                vec![l]
            }
            (Command::VerifyMap, None) => {
                let b = lambda_bounds(&frame);
                if b.is_empty() {
                    return Err(Failure::validation(format!("no admissible lambda for N = {dim}")));
                }
                b.collect()
            }
            (_, Some(_)) => return Err(Failure::validation("--lambda is only valid for verify-map")),
            (_, None) => Vec::new(),
        };
        if command == Command::VerifyMap {
            match family {
                Some(Family::Kratzer(_)) => {
                    if let Some(&n) = states.iter().find(|&&n| (n as i64) < ell + 1) {
                        return Err(Failure::validation(format!(
                            "verify-map labels Kratzer levels by n = n_r + l + 1, so n >= {} (got {n})",
                            ell + 1
                        )));
                    }
                }
                Some(Family::V1 { .. }) => {
                    if raw.states.is_some() && states != [0] {
                        return Err(Failure::validation("verify-map for v1 maps the ground state only"));
                    }
                }
                _ => return Err(Failure::validation("verify-map supports --family kratzer or v1")),
            }
        }

        let method = match raw.method.as_deref().unwrap_or("fd") {
            "fd" | "finite-difference" => Method::FiniteDifference,
            "numerov" => Method::NumerovShooting,
            other => return Err(Failure::validation(format!("unknown method '{other}' (fd, numerov)"))),
        };
        if let Some(p) = raw.grid_points {
            if p < MIN_GRID_POINTS {
                return Err(Failure::validation(format!("--grid-points must be >= {MIN_GRID_POINTS}")));
            }
        }
        for (v, flag) in [(raw.rmin, "rmin"), (raw.rmax, "rmax")] {
            if let Some(v) = v {
                positive(v, flag)?;
            }
        }
        if let (Some(a), Some(b)) = (raw.rmin, raw.rmax) {
            if a >= b {
                return Err(Failure::validation("--rmin must be below --rmax"));
            }
        }
        let tolerance = raw.tol.unwrap_or(match command {
            Command::VerifyMap => 1e-10,
            _ => 1e-6,
        });
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Failure::validation(format!("--tol must be > 0, got {tolerance}")));
        }
        let format = match raw.format.as_deref().unwrap_or("json") {
            "json" => Format::Json,
            "csv" => Format::Csv,
            other => return Err(Failure::validation(format!("unknown format '{other}' (json, csv)"))),
        };
        let count = raw.count.unwrap_or(20);
        if count == 0 {
            return Err(Failure::validation("--count must be >= 1"));
        }
        Ok(RunSpec {
            command,
            family,
            frame,
            states,
            lambdas,
            oracle: raw.oracle.unwrap_or(false) || command == Command::OracleCompare,
            method,
            grid: GridOverrides {
                points: raw.grid_points,
                r_min: raw.rmin,
                r_max: raw.rmax,
            },
            tolerance,
            batch,
            count,
            seed: raw.seed.unwrap_or(20_240_917),
            jobs: raw.jobs.unwrap_or(0),
            format,
            out: raw.out.clone(),
        })
    }

    /// Flat form that validates back to `self`.
    pub fn to_raw(&self) -> RawSpec {
        let mut raw = RawSpec {
            command: Some(self.command.name().to_string()),
            dim: Some(self.frame.dim() as i64),
            ell: Some(self.frame.ell() as i64),
            states: Some(self.states.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
            oracle: Some(self.oracle),
            method: Some(
                match self.method {
                    Method::FiniteDifference => "fd",
                    Method::NumerovShooting => "numerov",
                }
                .into(),
            ),
            grid_points: self.grid.points,
            rmin: self.grid.r_min,
            rmax: self.grid.r_max,
            tol: Some(self.tolerance),
            batch: self.batch.map(|b| {
                match b {
                    Batch::V1Random => "v1-random",
                    Batch::V2Sign => "v2-sign",
                    Batch::PseudoharmonicLadder => "pseudoharmonic-ladder",
                }
                .into()
            }),
            count: Some(self.count),
            seed: Some(self.seed),
            jobs: Some(self.jobs),
            format: Some(
                match self.format {
                    Format::Json => "json",
                    Format::Csv => "csv",
                }
                .into(),
            ),
            out: self.out.clone(),
            ..RawSpec::default()
        };
        if self.command == Command::VerifyMap && self.lambdas.len() == 1 {
            raw.lambda = Some(self.lambdas[0]);
        }
        if let Some(f) = self.family {
            raw.family = Some(f.name().into());
            match f {
                Family::Kratzer(p) => {
                    raw.a = Some(p.a());
                    raw.b = Some(p.b());
                }
                Family::Gk { a } => raw.a = Some(a),
                Family::V1 { a1, a2, a3, a4 } => {
                    raw.a1 = a1;
                    raw.a2 = Some(a2);
                    raw.a3 = Some(a3);
                    raw.a4 = Some(a4);
                }
                Family::V2 { b1, b2, b3, b4 } => {
                    raw.b1 = Some(b1);
                    raw.b2 = b2;
                    raw.b3 = Some(b3);
                    raw.b4 = Some(b4);
                }
                Family::Pseudoharmonic(p) => {
                    raw.b_tilde = Some(p.b_tilde());
                    raw.a_tilde = Some(p.a_tilde());
                    raw.v0 = Some(p.v0());
                }
            }
        }
        raw
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
