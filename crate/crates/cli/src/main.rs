// Copyright 2026 The fockchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//! Command-line front end: `generate`, `fig2` and `sweep`.

mod config;
mod report;
mod sweep;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockchain::Error;
use thiserror::Error as ThisError;

use crate::config::{load_target, parse_preset, RunConfig};
use crate::sweep::Axis;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("{0}")]
    ZeroProbability(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Solver(_) => 3,
            CliError::ZeroProbability(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidTarget(_) | Error::InvalidTransmittance(_) | Error::InvalidAngle(_) => {
                CliError::Parse(e.to_string())
            }
            Error::NonConvergence { .. }
            | Error::DegenerateStage { .. }
            | Error::RootFinding(_)
            | Error::ZeroPolynomial => CliError::Solver(e.to_string()),
            Error::ZeroProbability { .. } => CliError::ZeroProbability(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

/// Heralded linear-optics synthesis of two-mode fixed-photon-number states
#[derive(Parser, Debug)]
#[command(name = "fockchain", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TargetArgs {
    /// JSON target: {"n_total": N, "coefficients": [[re, im], ...]}
    #[arg(long, conflicts_with = "preset")]
    target: Option<PathBuf>,

    /// Named target, e.g. noon:4
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Transmittance of the conditioning splitters [default: 1/sqrt(2)]
    #[arg(long)]
    transmittance: Option<f64>,

    /// Seed for the solver's random restarts
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Required fidelity is 1 minus this
    #[arg(long, default_value_t = 1e-8)]
    fidelity_tolerance: f64,

    /// Angle tolerance (radians) on the matched effective parameters
    #[arg(long, default_value_t = 1e-9)]
    solver_tolerance: f64,

    /// Write output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose a target, compile the chain and simulate it
    Generate {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Simulate the four-photon NOON shortcut
    Fig2 {
        /// Transmittance of the two conditioning splitters [default: 1/sqrt(2)]
        #[arg(long)]
        transmittance: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep transmittance or NOON photon number and emit CSV
    Sweep {
        #[arg(long, value_enum)]
        axis: Axis,
        /// First axis value
        #[arg(long)]
        start: f64,
        /// Last axis value (inclusive)
        #[arg(long)]
        stop: f64,
        /// Number of transmittance points
        #[arg(long, default_value_t = 9)]
        steps: usize,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

fn resolve_target(args: &TargetArgs) -> Result<fockchain::TargetSpec, CliError> {
    match (&args.target, &args.preset) {
        (Some(path), None) => load_target(path),
        (None, Some(name)) => parse_preset(name),
        (None, None) => Err(CliError::Parse(
            "one of --target or --preset is required".into(),
        )),
        (Some(_), Some(_)) => Err(CliError::Parse(
            "--target and --preset are exclusive".into(),
        )),
    }
}

fn config(target: fockchain::TargetSpec, run: &RunArgs) -> Result<RunConfig, CliError> {
    RunConfig::new(
        target,
        run.transmittance,
        run.fidelity_tolerance,
        run.solver_tolerance,
        run.seed,
    )
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Generate {
            target,
            run,
            format,
        } => {
            let cfg = config(resolve_target(&target)?, &run)?;
            let r = report::generate(&cfg)?;
            let text = match format {
                Format::Text => report::render_generate_text(&r),
                Format::Structured => to_json(&r),
            };
            emit(&text, run.out.as_ref())?;
            Ok(if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Fig2 {
            transmittance,
            format,
            out,
        } => {
            if let Some(t) = transmittance {
                config::check_transmittance(t)?;
            }
            let r = report::fig2(transmittance)?;
            let text = match format {
                Format::Text => report::render_fig2_text(&r),
                Format::Structured => to_json(&r),
            };
            emit(&text, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            axis,
            start,
            stop,
            steps,
            target,
            run,
        } => {
            let rows = match axis {
                Axis::Transmittance => {
                    if !(start > 0.0 && stop < 1.0 && start <= stop) {
                        return Err(CliError::Parse(format!(
                            "transmittance range [{start}, {stop}] must lie inside (0, 1)"
                        )));
                    }
                    let cfg = config(resolve_target(&target)?, &run)?;
                    sweep::sweep_transmittance(
                        &cfg,
                        &sweep::transmittance_points(start, stop, steps),
                    )
                }
                Axis::Photons => {
                    if start < 1.0 || stop < start || start.fract() != 0.0 || stop.fract() != 0.0 {
                        return Err(CliError::Parse(format!(
                            "photon range [{start}, {stop}] must be integers with 1 <= start <= stop"
                        )));
                    }
                    // the target only fixes the solver settings here; N varies per row
                    let cfg = config(fockchain::TargetSpec::noon(1)?, &run)?;
                    let rows = sweep::sweep_photons(&cfg, start as usize, stop as usize);
                    let flagged = sweep::non_monotone_rows(&rows);
                    if !flagged.is_empty() {
                        eprintln!("note: success probability increases at N = {flagged:?}");
                    }
                    rows
                }
            };
            emit(&sweep::render_csv(axis, &rows), run.out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
