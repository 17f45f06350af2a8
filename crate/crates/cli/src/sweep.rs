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
//! Parameter sweeps emitted as CSV.

use fockchain::compiler::solve_scheme_with;
use fockchain::{decompose, run_chain, Error, TargetSpec};
use rayon::prelude::*;

use crate::config::RunConfig;

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Axis {
    Transmittance,
    Photons,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<(f64, f64), &'static str>,
}

fn status(e: &Error) -> &'static str {
    match e {
        Error::NonConvergence { .. } | Error::DegenerateStage { .. } | Error::RootFinding(_) => {
            "solver_failed"
        }
        Error::ZeroProbability { .. } => "zero_probability",
        _ => "error",
    }
}

fn evaluate(config: &RunConfig, target: &TargetSpec, t: f64) -> Result<(f64, f64), &'static str> {
    let run = || -> Result<(f64, f64), Error> {
        let d = decompose(target)?;
        let scheme = solve_scheme_with(&d.ideal_params, t, &config.solver)?;
        let out = run_chain(&scheme, Some(target))?;
        Ok((
            out.success_probability,
            out.fidelity_vs_target.unwrap_or(0.0),
        ))
    };
    run().map_err(|e| status(&e))
}

/// Evenly spaced transmittances from `start` to `stop` inclusive.
pub fn transmittance_points(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..steps)
            .map(|k| start + (stop - start) * k as f64 / (steps - 1) as f64)
            .collect(),
    }
}

pub fn sweep_transmittance(config: &RunConfig, points: &[f64]) -> Vec<SweepRow> {
    points
        .par_iter()
        .map(|&t| SweepRow {
            value: t,
            outcome: evaluate(config, &config.target, t),
        })
        .collect()
}

/// NOON targets for `N = start..=stop` at the configured transmittance.
pub fn sweep_photons(config: &RunConfig, start: usize, stop: usize) -> Vec<SweepRow> {
    (start..=stop)
        .into_par_iter()
        .map(|n| {
            let outcome = TargetSpec::noon(n)
                .map_err(|_| "error")
                .and_then(|t| evaluate(config, &t, config.transmittance));
            SweepRow {
                value: n as f64,
                outcome,
            }
        })
        .collect()
}

/// Rows whose success probability rises above an earlier row's.
pub fn non_monotone_rows(rows: &[SweepRow]) -> Vec<f64> {
    let mut worst = f64::INFINITY;
    let mut flagged = Vec::new();
    for row in rows {
        if let Ok((p, _)) = row.outcome {
            if p > worst {
                flagged.push(row.value);
            }
            worst = worst.min(p);
        }
    }
    flagged
}

/// Fixed-width scientific notation with 15 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn render_csv(axis: Axis, rows: &[SweepRow]) -> String {
    let name = match axis {
        Axis::Transmittance => "transmittance",
        Axis::Photons => "n_total",
    };
    let mut out = format!("{name},success_probability,fidelity,status\n");
    for row in rows {
        let value = match axis {
            Axis::Transmittance => format_number(row.value),
            Axis::Photons => format!("{}", row.value as usize),
        };
        match row.outcome {
            Ok((p, f)) => out.push_str(&format!(
                "{value},{},{},ok\n",
                format_number(p),
                format_number(f)
            )),
            Err(flag) => out.push_str(&format!("{value},,,{flag}\n")),
        }
    }
    out
}
