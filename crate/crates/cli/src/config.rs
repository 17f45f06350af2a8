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
//! Run configuration and target loading.

use std::fs;
use std::path::Path;

use fockchain::compiler::{SolverOptions, DEFAULT_TRANSMITTANCE};
use fockchain::TargetSpec;
use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::CliError;

/// Input norms further than this from 1 trigger a warning on load.
const NORM_WARNING: f64 = 1e-6;

#[derive(Debug, Deserialize)]
struct TargetFile {
    n_total: usize,
    coefficients: Vec<[f64; 2]>,
}

/// Parses the JSON target document `{"n_total": N, "coefficients": [[re, im], ...]}`.
pub fn parse_target(text: &str) -> Result<TargetSpec, CliError> {
    let file: TargetFile =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("target file: {e}")))?;
    if file.n_total == 0 {
        return Err(CliError::Parse("n_total must be at least 1".into()));
    }
    if file.coefficients.len() != file.n_total + 1 {
        return Err(CliError::Parse(format!(
            "expected {} coefficients for n_total = {}, found {}",
            file.n_total + 1,
            file.n_total,
            file.coefficients.len()
        )));
    }
    let coeffs: Vec<C64> = file
        .coefficients
        .iter()
        .map(|[re, im]| C64::new(*re, *im))
        .collect();
    let norm_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if (norm_sq.sqrt() - 1.0).abs() > NORM_WARNING && norm_sq > 0.0 {
        eprintln!("warning: target norm is {:.9}, normalizing", norm_sq.sqrt());
    }
    TargetSpec::new(coeffs).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn load_target(path: &Path) -> Result<TargetSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_target(&text)
}

/// `noon:N` presets.
pub fn parse_preset(name: &str) -> Result<TargetSpec, CliError> {
    let n = name
        .strip_prefix("noon:")
        .and_then(|n| n.parse::<usize>().ok())
        .ok_or_else(|| CliError::Parse(format!("unknown preset '{name}' (expected noon:N)")))?;
    TargetSpec::noon(n).map_err(|e| CliError::Parse(e.to_string()))
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub target: TargetSpec,
    pub transmittance: f64,
    pub fidelity_threshold: f64,
    pub solver: SolverOptions,
}

impl RunConfig {
    pub fn new(
        target: TargetSpec,
        transmittance: Option<f64>,
        fidelity_tolerance: f64,
        solver_tolerance: f64,
        seed: u64,
    ) -> Result<Self, CliError> {
        let transmittance = transmittance.unwrap_or(DEFAULT_TRANSMITTANCE);
        check_transmittance(transmittance)?;
        if !(fidelity_tolerance > 0.0 && solver_tolerance > 0.0) {
            return Err(CliError::Parse("tolerances must be positive".into()));
        }
        let solver = SolverOptions {
            tolerance: solver_tolerance,
            seed,
            ..SolverOptions::default()
        };
        Ok(RunConfig {
            target,
            transmittance,
            fidelity_threshold: 1.0 - fidelity_tolerance,
            solver,
        })
    }
}

pub fn check_transmittance(t: f64) -> Result<(), CliError> {
    if t.is_finite() && t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(CliError::Parse(format!("transmittance {t} outside (0, 1)")))
    }
}
