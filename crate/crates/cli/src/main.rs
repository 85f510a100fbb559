//! `susy-radial`: closed-form spectra, duality checks and numerical
//! cross-validation from the command line.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when a numerical solve
//! fails to converge.

mod commands;
mod record;
mod spec;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use record::{write_csv, write_json};
use spec::{Command, Format, RawSpec, RunSpec};

#[derive(Parser)]
#[command(name = "susy-radial", version, about = "Radial spectra of singular potentials in N dimensions")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Analytic energies, optionally checked against the numerical solver.
    Spectrum(RunArgs),
    /// Check the Kratzer to Goldman-Krivchenkov (or inverse-power to
    /// even-power) duality level by level.
    VerifyMap(RunArgs),
    /// Analytic versus numerical tables, including randomized batches.
    OracleCompare(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML file of flag-named keys; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the fully resolved run as TOML to PATH, then run.
    #[arg(long, value_name = "PATH")]
    save_config: Option<PathBuf>,
    #[command(flatten)]
    spec: RawSpec,
}

/// A user-facing failure with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn from_core(e: susy_radial::Error) -> Self {
        Self {
            code: if e.is_solver_failure() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn run(command: Command, args: RunArgs) -> Result<(), Failure> {
    let raw = match &args.config {
        Some(path) => RawSpec::load(path)?.overlaid(args.spec),
        None => args.spec,
    };
    if let Some(c) = raw.command.as_deref() {
        if args.config.is_some() && c != command.name() {
            eprintln!("note: config was written for '{c}', running '{command}'");
        }
    }
    let spec = RunSpec::validate(command, &raw)?;
    if let Some(path) = &args.save_config {
        std::fs::write(path, spec.to_raw().to_toml())
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display())))?;
    }
    let records = commands::execute(&spec)?;
    let sink: Box<dyn Write> = match &spec.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            Failure::validation(format!("cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(io::stdout().lock()),
    };
    match spec.format {
        Format::Json => write_json(&records, sink),
        Format::Csv => write_csv(&records, sink),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Spectrum(a) => (Command::Spectrum, a),
        Sub::VerifyMap(a) => (Command::VerifyMap, a),
        Sub::OracleCompare(a) => (Command::OracleCompare, a),
    };
    match run(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
