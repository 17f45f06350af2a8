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
//! Heralded circuit simulation: the general chain and the four-photon
//! shortcut.
//!
//! Success probabilities are tracked as products of conditional zero-count
//! probabilities. Since beam splitters are unitary and the input is normalized,
//! that product always equals the squared norm of the final unnormalized
//! state.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::compiler::{check_transmittance, SchemeParams};
use crate::decompose::TargetSpec;
use crate::error::{Error, Result};
use crate::fock::{fidelity, BSParams, FockState};

/// Success probability quoted for the four-photon shortcut.
pub const CLAIMED_FIG2_PROBABILITY: f64 = 1.0 / 16.0;

/// Success probability quoted for the earlier four-photon NOON scheme it is
/// compared with.
pub const COMPARISON_SCHEME_PROBABILITY: f64 = 3.0 / 64.0;

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitOutcome {
    /// Normalized output.
    pub final_state: FockState,
    /// Squared norm of the conditioned output before normalization.
    pub raw_norm_sq: f64,
    pub success_probability: f64,
    /// Conditional zero-count probability of each detector, in firing order.
    pub stage_probabilities: Vec<f64>,
    pub fidelity_vs_target: Option<f64>,
}

/// Chain rule: the joint probability of all zero counts.
pub fn success_probability(stage_probabilities: &[f64]) -> f64 {
    stage_probabilities.iter().product()
}

/// `R = √(1 − T²)` for a lossless splitter with real transmittance `T`.
pub fn reflectance(t: f64) -> f64 {
    (1.0 - t * t).sqrt()
}

/// The conditional element `Y = R a† T^{n_a}` on `mode`.
pub fn conditional_photon_addition(state: &FockState, mode: usize, t: f64) -> Result<FockState> {
    state
        .apply_attenuation(mode, C64::new(t, 0.0))?
        .add_photon(mode)
        .map(|s| s.scaled(C64::new(reflectance(t), 0.0)))
}

/// The optical realization of `Y`: a one-photon ancilla is mixed with `mode`
/// on a splitter of transmittance `T` and the ancilla port is heralded on a
/// zero count. The result is unnormalized.
pub fn heralded_photon_addition(state: &FockState, mode: usize, t: f64) -> Result<FockState> {
    check_transmittance(t)?;
    let ancilla = state.modes();
    let splitter = BSParams::new(t.acos(), 0.0)?;
    state
        .append_mode(1)
        .apply_beamsplitter(mode, ancilla, splitter)?
        .project_zero(ancilla)?
        .remove_vacuum_mode(ancilla)?
        .with_cap(state.cap())
}

/// Simulates the heralded chain
/// `B'_N Y B'_{N−1} Y ⋯ Y B'_1 a† |0⟩` on two modes with cap `N`.
pub fn run_chain(scheme: &SchemeParams, target: Option<&TargetSpec>) -> Result<CircuitOutcome> {
    let n = scheme.n_total();
    if let Some(t) = target {
        if t.n_total() != n {
            return Err(Error::StageCount {
                expected: t.n_total(),
                got: n,
            });
        }
    }
    let transmittance = scheme.transmittance();
    let stages = scheme.stages();

    let mut state = FockState::vacuum(2, n as u32).add_photon(0)?;
    state = state.apply_beamsplitter(0, 1, stages[0])?;
    let mut stage_probabilities = Vec::with_capacity(n.saturating_sub(1));
    for (k, stage) in stages.iter().enumerate().skip(1) {
        let before = state.norm_sq();
        state = conditional_photon_addition(&state, 0, transmittance)?;
        let after = state.norm_sq();
        if after == 0.0 || !after.is_finite() {
            return Err(Error::ZeroProbability { stage: k });
        }
        stage_probabilities.push(after / before);
        state = state.apply_beamsplitter(0, 1, *stage)?;
    }

    finish(
        state,
        stage_probabilities,
        target.map(TargetSpec::to_state).as_ref(),
    )
}

fn finish(
    state: FockState,
    stage_probabilities: Vec<f64>,
    target: Option<&FockState>,
) -> Result<CircuitOutcome> {
    let raw_norm_sq = state.norm_sq();
    let final_state = state.normalized()?;
    let fidelity_vs_target = target.map(|t| fidelity(&final_state, t)).transpose()?;
    Ok(CircuitOutcome {
        final_state,
        raw_norm_sq,
        success_probability: success_probability(&stage_probabilities),
        stage_probabilities,
        fidelity_vs_target,
    })
}

/// `Π_j B(θ_j, φ_j) a† B(θ_j, φ_j)† |0⟩`, normalized: the ideal factored form
/// of a target, or the effective form of a compiled chain.
pub fn factor_chain_state(params: &[BSParams]) -> Result<FockState> {
    let mut state = FockState::vacuum(2, params.len() as u32);
    for p in params {
        state = state
            .apply_beamsplitter(0, 1, p.inverse())?
            .add_photon(0)?
            .apply_beamsplitter(0, 1, *p)?;
    }
    state.normalized()
}

/// What to do with the two ancilla detectors of the four-photon shortcut.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetectPolicy {
    /// Accept only when both detectors see no photon.
    #[default]
    HeraldZero,
    /// Skip the measurement and keep the ancilla modes.
    Ignore,
}

/// Splitters of the four-photon shortcut.
///
/// Modes 0 and 1 carry the output; modes 2 and 3 carry the ancilla photons.
/// `bs[0]` acts on (0, 1), `bs[1]` on (0, 2), `bs[2]` on (1, 3) and
/// `bs[3]` on (0, 1).
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Fig2Params {
    pub bs: [BSParams; 4],
    pub policy: DetectPolicy,
}

impl Default for Fig2Params {
    /// All splitters symmetric. φ = 0 on the first splitter gives
    /// `(|2,0⟩ − |0,2⟩)/√2`; φ = π/2 on the last maps `(|3,1⟩ − |1,3⟩)/√2` onto
    /// `−i(|4,0⟩ − |0,4⟩)/√2`.
    fn default() -> Self {
        Fig2Params {
            bs: [
                BSParams::symmetric(0.0),
                BSParams::symmetric(0.0),
                BSParams::symmetric(0.0),
                BSParams::symmetric(FRAC_PI_2),
            ],
            policy: DetectPolicy::HeraldZero,
        }
    }
}

impl Fig2Params {
    /// Default splitters, with both conditioning splitters at transmittance `t`.
    pub fn with_transmittance(t: f64) -> Result<Self> {
        check_transmittance(t)?;
        let mut p = Self::default();
        p.bs[1] = BSParams::new(t.acos(), 0.0)?;
        p.bs[2] = BSParams::new(t.acos(), 0.0)?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig2Outcome {
    pub outcome: CircuitOutcome,
    /// After the first splitter (normalized).
    pub after_first_splitter: FockState,
    /// After the two heralding projections, before the last splitter
    /// (unnormalized).
    pub after_projection: FockState,
    /// Fidelities of the three snapshots against [`fig2_reference_states`].
    pub snapshot_fidelities: [f64; 3],
}

/// The three intermediate states of the four-photon shortcut, embedded in
/// four modes: `(|0,2⟩−|2,0⟩)/√2 ⊗ |1,1⟩`, `(|1,3⟩−|3,1⟩)/√2 ⊗ |0,0⟩` and
/// `(|0,4⟩−|4,0⟩)/√2 ⊗ |0,0⟩`.
pub fn fig2_reference_states() -> [FockState; 3] {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let pair = |a: [u32; 4], b: [u32; 4]| {
        FockState::from_amplitudes(4, 4, [(a.to_vec(), h), (b.to_vec(), -h)]).expect("valid kets")
    };
    [
        pair([0, 2, 1, 1], [2, 0, 1, 1]),
        pair([1, 3, 0, 0], [3, 1, 0, 0]),
        pair([0, 4, 0, 0], [4, 0, 0, 0]),
    ]
}

/// Simulates the four-photon shortcut starting from `|1,1,1,1⟩`.
pub fn run_fig2(params: &Fig2Params) -> Result<Fig2Outcome> {
    let [bs1, bs2, bs3, bs4] = params.bs;
    let refs = fig2_reference_states();

    let input = FockState::basis(4, &[1, 1, 1, 1])?;
    let after_first_splitter = input.apply_beamsplitter(0, 1, bs1)?;
    let mixed = after_first_splitter
        .apply_beamsplitter(0, 2, bs2)?
        .apply_beamsplitter(1, 3, bs3)?;

    let mut stage_probabilities = Vec::new();
    let after_projection = match params.policy {
        DetectPolicy::HeraldZero => {
            let mut state = mixed;
            for (stage, mode) in [2usize, 3].into_iter().enumerate() {
                let before = state.norm_sq();
                state = state.project_zero(mode)?;
                let after = state.norm_sq();
                if after == 0.0 {
                    return Err(Error::ZeroProbability { stage: stage + 1 });
                }
                stage_probabilities.push(after / before);
            }
            state
        }
        DetectPolicy::Ignore => mixed,
    };
    let final_raw = after_projection.apply_beamsplitter(0, 1, bs4)?;

    let outcome = finish(final_raw, stage_probabilities, Some(&refs[2]))?;
    let snapshot_fidelities = [
        fidelity(&after_first_splitter, &refs[0])?,
        fidelity(&after_projection, &refs[1])?,
        outcome.fidelity_vs_target.unwrap_or(0.0),
    ];
    Ok(Fig2Outcome {
        outcome,
        after_first_splitter,
        after_projection,
        snapshot_fidelities,
    })
}
