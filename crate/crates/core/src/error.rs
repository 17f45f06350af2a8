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

use thiserror::Error;

/// Everything that can go wrong while building, compiling or simulating a
/// heralded chain.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error("mode index {mode} out of range for a {modes}-mode state")]
    InvalidMode { mode: usize, modes: usize },

    #[error("beam splitter needs two distinct modes, got {0} twice")]
    SameMode(usize),

    #[error("adding a photon to mode {mode} would exceed the photon cap {cap}")]
    PhotonCapExceeded { mode: usize, cap: u32 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("states are incompatible: {0}")]
    Incompatible(String),

    #[error("invalid beam splitter angle theta = {0} (expected 0 <= theta <= pi/2)")]
    InvalidAngle(f64),

    #[error("transmittance {0} outside the open interval (0, 1)")]
    InvalidTransmittance(f64),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("characteristic polynomial is identically zero")]
    ZeroPolynomial,

    #[error("root finder failed: {0}")]
    RootFinding(String),

    #[error("expected {expected} stage parameters, got {got}")]
    StageCount { expected: usize, got: usize },

    #[error("recursion degenerate at step {index}: A and B vanish together")]
    DegenerateStage { index: usize },

    #[error("stage {stage} did not converge after multi-start (residual {residual:e})")]
    NonConvergence { stage: usize, residual: f64 },

    #[error("heralding branch has zero probability at stage {stage}")]
    ZeroProbability { stage: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
