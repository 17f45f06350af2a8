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
//! Report assembly and rendering for `generate` and `fig2`.

use std::fmt::Write as _;

use fockchain::circuit::{
    run_fig2, Fig2Params, CLAIMED_FIG2_PROBABILITY, COMPARISON_SCHEME_PROBABILITY,
};
use fockchain::compiler::solve_scheme_with;
use fockchain::{decompose, run_chain, BSParams};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerateReport {
    pub n_total: usize,
    pub transmittance: f64,
    pub reflectance: f64,
    pub seed: u64,
    /// Normalized `C_n` as `[re, im]`.
    pub target: Vec<[f64; 2]>,
    pub roots: Vec<[f64; 2]>,
    pub infinite_roots: usize,
    pub ideal_angles: Vec<BSParams>,
    /// `scheme[k-1]` is stage `k`.
    pub scheme: Vec<BSParams>,
    pub stage_probabilities: Vec<f64>,
    pub success_probability: f64,
    pub raw_norm_sq: f64,
    pub fidelity: f64,
    pub fidelity_threshold: f64,
}

impl GenerateReport {
    pub fn passed(&self) -> bool {
        self.fidelity >= self.fidelity_threshold
    }
}

pub fn generate(config: &RunConfig) -> Result<GenerateReport, CliError> {
    let target = &config.target;
    let d = decompose(target)?;
    let scheme = solve_scheme_with(&d.ideal_params, config.transmittance, &config.solver)?;
    let out = run_chain(&scheme, Some(target))?;
    Ok(GenerateReport {
        n_total: target.n_total(),
        transmittance: scheme.transmittance(),
        reflectance: scheme.reflectance(),
        seed: config.solver.seed,
        target: target.coefficients().iter().map(|c| [c.re, c.im]).collect(),
        roots: d.roots.iter().map(|c| [c.re, c.im]).collect(),
        infinite_roots: d.infinite_roots,
        ideal_angles: d.ideal_params,
        scheme: scheme.stages().to_vec(),
        stage_probabilities: out.stage_probabilities,
        success_probability: out.success_probability,
        raw_norm_sq: out.raw_norm_sq,
        fidelity: out.fidelity_vs_target.unwrap_or(0.0),
        fidelity_threshold: config.fidelity_threshold,
    })
}

pub fn render_generate_text(r: &GenerateReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "target            N = {}, T = {:.15}, R = {:.15}",
        r.n_total, r.transmittance, r.reflectance
    );
    for (n, [re, im]) in r.target.iter().enumerate() {
        let _ = writeln!(s, "  C_{n:<3} {re:+.12} {im:+.12}i");
    }
    let _ = writeln!(
        s,
        "roots             {} finite, {} at infinity",
        r.roots.len(),
        r.infinite_roots
    );
    for (i, [re, im]) in r.roots.iter().enumerate() {
        let _ = writeln!(s, "  beta_{:<3} {re:+.12} {im:+.12}i", i + 1);
    }
    let _ = writeln!(s, "ideal angles      theta            phi");
    for (j, p) in r.ideal_angles.iter().enumerate() {
        let _ = writeln!(s, "  j = {:<3} {:+.12} {:+.12}", j + 1, p.theta(), p.phi());
    }
    let _ = writeln!(s, "chain stages      theta'           phi'");
    for (k, p) in r.scheme.iter().enumerate() {
        let _ = writeln!(s, "  k = {:<3} {:+.12} {:+.12}", k + 1, p.theta(), p.phi());
    }
    let _ = writeln!(s, "detector         P(zero | earlier zeros)");
    for (k, p) in r.stage_probabilities.iter().enumerate() {
        let _ = writeln!(s, "  D_{:<3}          {p:.15}", k + 1);
    }
    let _ = writeln!(s, "success probability  {:.15}", r.success_probability);
    let _ = writeln!(s, "raw norm squared     {:.15}", r.raw_norm_sq);
    let _ = writeln!(s, "fidelity             1 - {:.3e}", 1.0 - r.fidelity);
    let _ = writeln!(
        s,
        "status               {}",
        if r.passed() { "ok" } else { "below threshold" }
    );
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig2Report {
    pub transmittance: f64,
    /// After the first splitter, after heralding, final.
    pub intermediate_fidelities: [f64; 3],
    pub stage_probabilities: Vec<f64>,
    pub success_probability: f64,
    pub raw_norm_sq: f64,
    pub claimed_probability: f64,
    pub comparison_probability: f64,
}

pub fn fig2(transmittance: Option<f64>) -> Result<Fig2Report, CliError> {
    let params = match transmittance {
        Some(t) => Fig2Params::with_transmittance(t)?,
        None => Fig2Params::default(),
    };
    let out = run_fig2(&params)?;
    Ok(Fig2Report {
        transmittance: params.bs[1].theta().cos(),
        intermediate_fidelities: out.snapshot_fidelities,
        stage_probabilities: out.outcome.stage_probabilities,
        success_probability: out.outcome.success_probability,
        raw_norm_sq: out.outcome.raw_norm_sq,
        claimed_probability: CLAIMED_FIG2_PROBABILITY,
        comparison_probability: COMPARISON_SCHEME_PROBABILITY,
    })
}

pub fn render_fig2_text(r: &Fig2Report) -> String {
    let labels = [
        "(|0,2> - |2,0>)/sqrt2",
        "(|1,3> - |3,1>)/sqrt2",
        "(|0,4> - |4,0>)/sqrt2",
    ];
    let mut s = String::new();
    let _ = writeln!(
        s,
        "four-photon NOON shortcut, conditioning T = {:.15}",
        r.transmittance
    );
    for (label, f) in labels.iter().zip(r.intermediate_fidelities) {
        let _ = writeln!(s, "  fidelity vs {label:<24} 1 - {:.3e}", 1.0 - f);
    }
    for (k, p) in r.stage_probabilities.iter().enumerate() {
        let _ = writeln!(s, "  P(D_{} = 0 | earlier)          {p:.15}", k + 1);
    }
    let _ = writeln!(
        s,
        "simulated success probability    {:.15}",
        r.success_probability
    );
    let _ = writeln!(s, "raw norm squared                 {:.15}", r.raw_norm_sq);
    let _ = writeln!(
        s,
        "claimed success probability      {} (1/16)",
        r.claimed_probability
    );
    let _ = writeln!(
        s,
        "comparison scheme probability    {} (3/64)",
        r.comparison_probability
    );
    s
}
