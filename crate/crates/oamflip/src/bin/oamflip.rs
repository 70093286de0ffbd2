//! Thin command-line front end over the oamflip library.
//!
//! Exit codes: 0 success, 1 validation failure, 2 config or data error,
//! 3 physics-domain error.

use clap::{Parser, Subcommand};
use oamflip::beams::GouyConvention;
use oamflip::config::ConfigDocument;
use oamflip::error::Error;
use oamflip::scan::{self, SweepAxis, SweepSpec};
use oamflip::validate::{run_suite, Profile};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "oamflip",
    about = "Photon-hydrogen matrix elements for plane-wave and twisted light",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one matrix element from a JSON config and print the record.
    Element {
        /// Path to the JSON configuration document.
        config: PathBuf,
    },
    /// Sweep one parameter axis over a grid and print CSV rows.
    Sweep {
        /// Path to the JSON configuration document (axis field omitted).
        config: PathBuf,
        /// Axis to sweep: waist | rayleigh_range | wavelength | ell | p | n.
        #[arg(long)]
        axis: String,
        /// Comma-separated grid values, strictly monotone, at least two.
        #[arg(long)]
        grid: String,
    },
    /// Fit a power law to the axis_value / abs_M columns of a sweep CSV.
    Fit {
        /// Path to a CSV file produced by `sweep`.
        csv: PathBuf,
    },
    /// Run the validation suite and exit 0 only if every check passes.
    Validate {
        /// Carry the winding sign into the Gouy phase (deliberate mutation;
        /// makes the parity falsifier check fail).
        #[arg(long)]
        mutate_gouy: bool,
        /// Tolerance profile: default | tight.
        #[arg(long, default_value = "default")]
        profile: String,
    },
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Element { config } => {
            let text = std::fs::read_to_string(&config)?;
            let doc = ConfigDocument::from_json(&text)?;
            let record = scan::evaluate_element(&doc, GouyConvention::Modulus)?;
            let resolved = oamflip::config::resolve(&doc, None)?;
            if !resolved.channel.beam_in().is_paraxial() {
                eprintln!(
                    "warning: wavelength is not small against the Rayleigh range; \
                     the paraxial mode profile is approximate here"
                );
            }
            println!("{}", record.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config, axis, grid } => {
            let text = std::fs::read_to_string(&config)?;
            let doc = ConfigDocument::from_json(&text)?;
            let axis: SweepAxis = axis.parse()?;
            let grid = parse_grid(&grid)?;
            let spec = SweepSpec::new(axis, grid)?;
            let csv = scan::run_sweep(&doc, &spec, GouyConvention::Modulus)?;
            print!("{csv}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Fit { csv } => {
            let text = std::fs::read_to_string(&csv)?;
            let points = scan::parse_sweep_csv(&text)?;
            let fit = scan::fit_power_law(&points)?;
            println!(
                "{}",
                serde_json::json!({
                    "slope": fit.slope,
                    "intercept_ln": fit.intercept,
                    "max_residual": fit.max_residual,
                    "points": points.len(),
                })
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            mutate_gouy,
            profile,
        } => {
            let profile: Profile = profile.parse()?;
            let gouy = if mutate_gouy {
                GouyConvention::Signed
            } else {
                GouyConvention::Modulus
            };
            let report = run_suite(profile, gouy);
            print!("{}", report.render());
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Error> {
    if text.trim().is_empty() {
        return Err(Error::config("grid", "grid must not be empty"));
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::config("grid", format!("bad grid value {s:?}: {e}")))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
