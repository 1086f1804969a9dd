//! `clonebelt`: optimal 1→2 cloning machines for qubit states drawn from a
//! latitude belt of the Bloch sphere.
//!
//! Subcommands emit solved belts as CSV (default) or JSON, or run the
//! self-verification suites. Exit codes: 0 on success, 1 when a verification
//! check fails, 2 for usage errors.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use clonebelt_core::{optimal_fidelity_surface, solve_optimal, Belt};

mod output;
mod verify;

use output::OutputRecord;

#[derive(Parser)]
#[command(
    name = "clonebelt",
    version,
    about = "Optimal symmetric 1-to-2 cloning of qubit states on a Bloch-sphere latitude belt"
)]
struct Cli {
    /// Output format for data records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Interpret input angles as degrees instead of radians.
    #[arg(long, global = true)]
    degrees: bool,

    /// Write records to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one belt and print its optimal machine.
    Optimal {
        /// Lower latitude (radians unless --degrees).
        #[arg(allow_negative_numbers = true)]
        theta1: f64,
        /// Upper latitude (radians unless --degrees).
        #[arg(allow_negative_numbers = true)]
        theta2: f64,
    },
    /// Solve every belt on the triangular (theta1, theta2) grid over [0, pi].
    Grid {
        /// Grid steps per axis; emits (steps+1)(steps+2)/2 records.
        #[arg(long)]
        steps: usize,
    },
    /// Sweep theta2 from theta1 to pi at fixed theta1.
    Curve {
        /// Fixed lower latitude (radians unless --degrees).
        #[arg(long, allow_negative_numbers = true)]
        theta1: f64,
        /// Number of uniform increments; emits steps+1 records.
        #[arg(long)]
        steps: usize,
    },
    /// Run the self-verification suites and report pass/fail per check.
    Verify {
        #[arg(value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Optimal { theta1, theta2 } => {
            let theta1 = input_angle(theta1, cli.degrees);
            let theta2 = input_angle(theta2, cli.degrees);
            let belt = Belt::new(theta1, theta2)?;
            emit(&[OutputRecord::for_belt(&belt)], cli.format, cli.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Grid { steps } => {
            if steps < 2 {
                bail!("grid needs --steps of at least 2, got {steps}");
            }
            let records: Vec<OutputRecord> = optimal_fidelity_surface(steps)
                .iter()
                .map(|(belt, result)| OutputRecord::new(belt, result))
                .collect();
            emit(&records, cli.format, cli.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Curve { theta1, steps } => {
            if steps < 2 {
                bail!("curve needs --steps of at least 2, got {steps}");
            }
            let theta1 = input_angle(theta1, cli.degrees);
            if !(0.0..=PI).contains(&theta1) {
                bail!("theta1 = {theta1} is outside [0, pi]");
            }
            let records: Vec<OutputRecord> = (0..=steps)
                .map(|i| {
                    let theta2 = if i == steps {
                        PI
                    } else {
                        theta1 + i as f64 * (PI - theta1) / steps as f64
                    };
                    let belt = Belt::new(theta1, theta2).expect("sweep stays inside the triangle");
                    OutputRecord::new(&belt, &solve_optimal(&belt))
                })
                .collect();
            emit(&records, cli.format, cli.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, seed } => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let all_passed = verify::run(suite, seed, &mut out)?;
            out.flush()?;
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

/// Converts a degree input to radians and snaps values that are within
/// rounding distance of the exact grid anchors (0, pi/2, pi), so that
/// `--degrees 180` hits the closed-form constants bit-exactly.
fn input_angle(value: f64, degrees: bool) -> f64 {
    if !degrees {
        return value;
    }
    let radians = value.to_radians();
    for anchor in [0.0, FRAC_PI_2, PI] {
        if (radians - anchor).abs() <= 1e-12 {
            return anchor;
        }
    }
    radians
}

fn emit(records: &[OutputRecord], format: Format, path: Option<&std::path::Path>) -> anyhow::Result<()> {
    let mut sink: Box<dyn Write> = match path {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Csv => output::write_csv(records, &mut sink)?,
        Format::Json => output::write_json(records, &mut sink)?,
    }
    sink.flush()?;
    Ok(())
}
