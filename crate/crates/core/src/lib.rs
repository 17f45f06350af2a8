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
//! Heralded linear-optics synthesis of two-mode states with a fixed photon
//! number.
//!
//! The pipeline factors a target `Σ C_n |n, N−n⟩` into single-photon
//! creation operators rotated by beam splitters ([`decompose`]), maps the
//! ideal rotations onto a physical chain of beam splitters and conditional
//! photon additions ([`compiler`]), and simulates that chain exactly in a
//! truncated Fock space ([`circuit`]).

pub mod circuit;
pub mod compiler;
pub mod decompose;
pub mod error;
pub mod fock;

pub use circuit::{run_chain, run_fig2, CircuitOutcome, DetectPolicy, Fig2Outcome, Fig2Params};
pub use compiler::{effective_params, solve_scheme, EffectiveParams, SchemeParams};
pub use decompose::{decompose, Decomposition, TargetSpec};
pub use error::{Error, Result};
pub use fock::{fidelity, BSParams, FockState, Occupation};
