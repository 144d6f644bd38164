//! `convect`: onset of convection in an internally heated rigid-rigid layer.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use convect_core::galerkin::DEFAULT_A2_BRACKET;
use convect_core::oracle::DEFAULT_BASE_GRID;
use convect_core::{BasicStateParams, StabilityError};

use commands::Level;
use output::{Format, Meta, Record, Report};

/// Largest truncation accepted on the command line.
const MAX_MODES: usize = 40;

#[derive(Parser, Debug)]
#[command(
    name = "convect",
    version,
    about = "Critical Rayleigh numbers for an internally heated layer between rigid walls"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rayleigh number on the neutral curve at one wavenumber.
    Solve {
        /// Heating rate N.
        #[arg(long = "N", default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite)]
        heating: f64,
        /// Squared wavenumber.
        #[arg(long, allow_negative_numbers = true, value_parser = positive)]
        a2: f64,
        /// Number of Galerkin modes.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=MAX_MODES as i64))]
        n: u16,
        /// Also run the finite-difference oracle with this base grid.
        #[arg(long, num_args = 0..=1, default_missing_value = "64", value_name = "M", value_parser = grid)]
        oracle: Option<usize>,
    },
    /// Compare the reference table with computed values.
    Table {
        /// Number of Galerkin modes for the Ra_computed column.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=MAX_MODES as i64))]
        n: u16,
        /// Largest accepted relative deviation between converged Galerkin and the oracle.
        #[arg(long, default_value_t = 1e-3, value_parser = positive)]
        gate: f64,
        /// Base grid of the oracle.
        #[arg(long, default_value_t = DEFAULT_BASE_GRID, value_parser = grid)]
        grid: usize,
    },
    /// Neutral curve Ra(a2) on a uniform grid.
    Curve {
        #[arg(long = "N", default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite)]
        heating: f64,
        #[arg(long = "a2-min", allow_negative_numbers = true, value_parser = positive)]
        a2_min: f64,
        #[arg(long = "a2-max", allow_negative_numbers = true, value_parser = positive)]
        a2_max: f64,
        /// Number of grid points, endpoints included.
        #[arg(long, default_value_t = 33)]
        steps: usize,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=MAX_MODES as i64))]
        n: u16,
    },
    /// Minimum of the neutral curve.
    Critical {
        #[arg(long = "N", default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite)]
        heating: f64,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=MAX_MODES as i64))]
        n: u16,
        #[arg(long = "a2-min", default_value_t = DEFAULT_A2_BRACKET.0, allow_negative_numbers = true, value_parser = positive)]
        a2_min: f64,
        #[arg(long = "a2-max", default_value_t = DEFAULT_A2_BRACKET.1, allow_negative_numbers = true, value_parser = positive)]
        a2_max: f64,
        /// Also minimise the finite-difference oracle with this base grid.
        #[arg(long, num_args = 0..=1, default_missing_value = "32", value_name = "M", value_parser = grid)]
        oracle: Option<usize>,
    },
    /// Run the invariant suites.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
    },
    /// Conduction temperature profile.
    Profile {
        /// Temperature at the lower wall.
        #[arg(long, allow_negative_numbers = true, value_parser = finite)]
        theta0: f64,
        /// Lower-minus-upper wall temperature difference.
        #[arg(long, allow_negative_numbers = true, value_parser = finite)]
        dtheta: f64,
        /// Volumetric heating rate.
        #[arg(long, allow_negative_numbers = true, value_parser = finite)]
        eta: f64,
        /// Thermal conductivity.
        #[arg(long, allow_negative_numbers = true, value_parser = positive)]
        k: f64,
        /// Layer depth.
        #[arg(long, allow_negative_numbers = true, value_parser = positive)]
        h: f64,
        /// Height in [-h/2, h/2]; without it the whole layer is sampled.
        #[arg(long, allow_negative_numbers = true, value_parser = finite)]
        z: Option<f64>,
        /// Sample count when no height is given.
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Table { .. } => "table",
            Command::Curve { .. } => "curve",
            Command::Critical { .. } => "critical",
            Command::Verify { .. } => "verify",
            Command::Profile { .. } => "profile",
        }
    }
}

fn finite(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, got {s}"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x = finite(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

fn grid(s: &str) -> Result<usize, String> {
    let m: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (16..=1024).contains(&m) {
        Ok(m)
    } else {
        Err(format!("grid must lie in 16..=1024, got {m}"))
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Solver(StabilityError),
    Verification(Vec<String>),
    Io(std::io::Error),
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        match e {
            StabilityError::InvalidParameter { .. } | StabilityError::OutOfDomain { .. } => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Solver(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Solver(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Solver(err) => eprintln!("solver error: {err}"),
                CliError::Io(err) => eprintln!("i/o error: {err}"),
                CliError::Verification(failed) => {
                    for f in failed {
                        eprintln!("verification failed: {f}");
                    }
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let command = cli.command.name();
    let started = output::timestamp();
    let emit = |report: &dyn Emit| -> Result<(), CliError> {
        let meta = Meta {
            command,
            version: env!("CARGO_PKG_VERSION"),
            started: started.clone(),
            finished: output::timestamp(),
        };
        let mut sink = output::open_sink(cli.out.as_deref())?;
        report.emit(&mut *sink, cli.format, &meta)?;
        Ok(())
    };
    match cli.command {
        Command::Solve {
            heating,
            a2,
            n,
            oracle,
        } => emit(&commands::solve(heating, a2, n as usize, oracle)?),
        Command::Table { n, gate, grid } => {
            let outcome = commands::table(n as usize, gate, grid)?;
            emit(&outcome.report)?;
            if outcome.gate_failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(outcome.gate_failures))
            }
        }
        Command::Curve {
            heating,
            a2_min,
            a2_max,
            steps,
            n,
        } => emit(&commands::curve(
            heating, a2_min, a2_max, steps, n as usize,
        )?),
        Command::Critical {
            heating,
            n,
            a2_min,
            a2_max,
            oracle,
        } => emit(&commands::critical(
            heating,
            n as usize,
            (a2_min, a2_max),
            oracle,
        )?),
        Command::Verify { level } => {
            let report = commands::verify(level);
            emit(&report)?;
            let failed = commands::failed_checks(&report);
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(failed))
            }
        }
        Command::Profile {
            theta0,
            dtheta,
            eta,
            k,
            h,
            z,
            samples,
        } => {
            let params = BasicStateParams::new(theta0, dtheta, eta, k, h)?;
            emit(&commands::profile(params, z, samples)?)
        }
    }
}

/// Object-safe view of `Report<R>` so every command shares one writer.
trait Emit {
    fn emit(&self, sink: &mut dyn Write, format: Format, meta: &Meta) -> std::io::Result<()>;
}

impl<R: Record> Emit for Report<R> {
    fn emit(&self, sink: &mut dyn Write, format: Format, meta: &Meta) -> std::io::Result<()> {
        output::write_report(sink, format, meta, self)
    }
}
