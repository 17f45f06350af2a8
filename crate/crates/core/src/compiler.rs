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
//! Maps ideal rotation angles onto the physical heralded chain.
//!
//! The chain interleaves beam splitters `B'_k` with conditional photon
//! additions `R a† T^{n_a}`. Writing `P_k = B'_N T^{n_a} B'_{N−1} ⋯ T^{n_a} B'_k`
//! the chain state is `Π_k (P_k a† P_k⁻¹) |0⟩`, and each conjugated creation
//! operator is a linear combination of `a†` and `b†`:
//!
//! ```text
//! P a† P⁻¹ = A a† − B b†        P b† P⁻¹ = C a† + D b†
//! ```
//!
//! Stepping from `P_{k+1}` to `P_k` with `c = cos θ'_k`, `s e^{iφ} = sin θ'_k e^{iφ'_k}`:
//!
//! ```text
//! A' = T c A − s e^{iφ} C        B' = T c B + s e^{iφ} D
//! C' = c C + T s e^{−iφ} A       D' = c D − T s e^{−iφ} B
//! ```
//!
//! with `A = D = cos θ'_N`, `B = sin θ'_N e^{iφ'_N}`, `C = sin θ'_N e^{−iφ'_N}` at
//! the start. The signs were fixed against direct simulation of the chain (see
//! the `recursion_matches_single_photon_simulation` test).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{wrap_phase, BSParams};

/// Transmittance used when none is given (symmetric splitters).
pub const DEFAULT_TRANSMITTANCE: f64 = FRAC_1_SQRT_2;

/// Physical chain parameters: one beam splitter per stage plus the common
/// transmittance of the conditioning splitters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    stages: Vec<BSParams>,
    transmittance: f64,
}

impl SchemeParams {
    pub fn new(stages: Vec<BSParams>, transmittance: f64) -> Result<Self> {
        check_transmittance(transmittance)?;
        if stages.is_empty() {
            return Err(Error::StageCount {
                expected: 1,
                got: 0,
            });
        }
        Ok(SchemeParams {
            stages,
            transmittance,
        })
    }

    /// `stages()[k-1]` is `(θ'_k, φ'_k)`.
    pub fn stages(&self) -> &[BSParams] {
        &self.stages
    }

    pub fn n_total(&self) -> usize {
        self.stages.len()
    }

    pub fn transmittance(&self) -> f64 {
        self.transmittance
    }

    /// `R = √(1 − T²)`.
    pub fn reflectance(&self) -> f64 {
        (1.0 - self.transmittance * self.transmittance).sqrt()
    }
}

pub(crate) fn check_transmittance(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTransmittance(t))
    }
}

/// Heisenberg-picture mixing coefficients after `index` recursion steps.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RecursionState {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub index: usize,
}

impl RecursionState {
    /// Coefficients of `B'_N` alone.
    pub fn initial(last: BSParams) -> Self {
        let (s, c) = last.theta().sin_cos();
        RecursionState {
            a: C64::new(c, 0.0),
            b: C64::from_polar(s, last.phi()),
            c: C64::from_polar(s, -last.phi()),
            d: C64::new(c, 0.0),
            index: 0,
        }
    }

    /// Absorbs one more stage (and the `T^{n_a}` in front of it).
    pub fn step(&self, stage: BSParams, t: f64) -> Self {
        let (s, c) = stage.theta().sin_cos();
        let e = C64::from_polar(s, stage.phi());
        RecursionState {
            a: t * c * self.a - e * self.c,
            b: t * c * self.b + e * self.d,
            c: c * self.c + t * e.conj() * self.a,
            d: c * self.d - t * e.conj() * self.b,
            index: self.index + 1,
        }
    }

    /// The rotation `(α, β)` with `A a† − B b† ∝ cos α a† − e^{iβ} sin α b†`.
    ///
    /// The phase is set to 0 where it has no effect (`A = 0` or `B = 0`).
    pub fn factor(&self) -> Result<BSParams> {
        let (ma, mb) = (self.a.norm(), self.b.norm());
        if !(ma.is_finite() && mb.is_finite()) || (ma == 0.0 && mb == 0.0) {
            return Err(Error::DegenerateStage { index: self.index });
        }
        let alpha = mb.atan2(ma);
        let beta = if ma == 0.0 || mb == 0.0 {
            0.0
        } else {
            (self.b / self.a).arg()
        };
        BSParams::new(alpha, beta)
    }
}

/// Effective rotations `(α_j, β_j)`, `j = 1..N`, emulated by a physical chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    /// `pairs[j-1]` is `(α_j, β_j)`.
    pub pairs: Vec<BSParams>,
}

/// All recursion states `i = 0..N−1` for a scheme.
pub fn recursion(scheme: &SchemeParams) -> Vec<RecursionState> {
    let stages = scheme.stages();
    let n = stages.len();
    let mut states = Vec::with_capacity(n);
    let mut state = RecursionState::initial(stages[n - 1]);
    states.push(state);
    for i in 1..n {
        state = state.step(stages[n - 1 - i], scheme.transmittance());
        states.push(state);
    }
    states
}

/// Runs the recursion and converts each state into `(α_{N−i}, β_{N−i})`.
pub fn effective_params(scheme: &SchemeParams) -> Result<EffectiveParams> {
    let n = scheme.n_total();
    let mut pairs = vec![BSParams::identity(); n];
    for state in recursion(scheme) {
        pairs[n - 1 - state.index] = state.factor()?;
    }
    Ok(EffectiveParams { pairs })
}

/// Largest angle discrepancy between two rotation lists.
///
/// Phases are compared modulo 2π, and only where the rotation angle is
/// neither 0 nor π/2 (within 1e-9); at those points the phase does not
/// change the state.
pub fn angle_mismatch(a: &[BSParams], b: &[BSParams]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| pair_mismatch(*x, *y))
        .fold(0.0, f64::max)
}

fn pair_mismatch(x: BSParams, reference: BSParams) -> f64 {
    let dtheta = (x.theta() - reference.theta()).abs();
    let th = reference.theta();
    if !(1e-9..=FRAC_PI_2 - 1e-9).contains(&th) {
        dtheta
    } else {
        dtheta.max(wrap_phase(x.phi() - reference.phi()).abs())
    }
}

/// Knobs for [`solve_scheme_with`].
#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Per-component angle tolerance on the effective parameters (radians).
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Start grid used when the analytic initial guess fails.
    pub grid_theta: usize,
    pub grid_phi: usize,
    /// Seeded random starts tried after the grid.
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: 1e-9,
            max_iterations: 200,
            grid_theta: 5,
            grid_phi: 8,
            random_starts: 32,
            seed: 0,
        }
    }
}

/// [`solve_scheme_with`] with default options.
pub fn solve_scheme(ideal: &[BSParams], transmittance: f64) -> Result<SchemeParams> {
    solve_scheme_with(ideal, transmittance, &SolverOptions::default())
}

/// Finds stage angles whose effective rotations equal `ideal`
/// (`ideal[j-1] = (θ_j, φ_j)`).
///
/// Stage N is copied directly. Every earlier stage `N−i` adds two real
/// unknowns that enter only `A_i, B_i`, so the stages are solved one at a
/// time from the back, each as a 2×2 damped Gauss-Newton problem on
/// `cos θ_t B_i − e^{iφ_t} sin θ_t A_i = 0`.
pub fn solve_scheme_with(
    ideal: &[BSParams],
    transmittance: f64,
    opts: &SolverOptions,
) -> Result<SchemeParams> {
    check_transmittance(transmittance)?;
    let n = ideal.len();
    if n == 0 {
        return Err(Error::StageCount {
            expected: 1,
            got: 0,
        });
    }
    let mut stages = vec![BSParams::identity(); n];
    stages[n - 1] = ideal[n - 1];
    let mut state = RecursionState::initial(stages[n - 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    for i in 1..n {
        let k = n - 1 - i;
        let stage =
            solve_stage(&state, ideal[k], transmittance, opts, &mut rng).map_err(|residual| {
                Error::NonConvergence {
                    stage: k + 1,
                    residual,
                }
            })?;
        stages[k] = stage;
        state = state.step(stage, transmittance);
    }

    let scheme = SchemeParams::new(stages, transmittance)?;
    let achieved = effective_params(&scheme)?;
    let mismatch = angle_mismatch(&achieved.pairs, ideal);
    if mismatch > opts.tolerance {
        return Err(Error::NonConvergence {
            stage: 0,
            residual: mismatch,
        });
    }
    Ok(scheme)
}

// Linear form of the stage condition: c·u + s·e^{iφ}·v = 0.
struct StageEquation {
    u: C64,
    v: C64,
    norm: f64,
}

impl StageEquation {
    fn new(prev: &RecursionState, target: BSParams, t: f64) -> Self {
        let (st, ct) = target.theta().sin_cos();
        let e = C64::from_polar(st, target.phi());
        let u = t * (ct * prev.b - e * prev.a);
        let v = ct * prev.d + e * prev.c;
        let norm = (u.norm_sqr() + v.norm_sqr()).sqrt();
        StageEquation { u, v, norm }
    }

    fn residual(&self, theta: f64, phi: f64) -> C64 {
        let (s, c) = theta.sin_cos();
        (c * self.u + C64::from_polar(s, phi) * self.v) / self.norm
    }

    fn jacobian(&self, theta: f64, phi: f64) -> (C64, C64) {
        let (s, c) = theta.sin_cos();
        let e = C64::from_polar(1.0, phi);
        let d_theta = (-s * self.u + c * e * self.v) / self.norm;
        let d_phi = C64::i() * s * e * self.v / self.norm;
        (d_theta, d_phi)
    }

    fn levenberg_marquardt(&self, mut x: [f64; 2], max_iter: usize) -> ([f64; 2], f64) {
        let mut r = self.residual(x[0], x[1]);
        let mut lambda = 1e-3;
        for _ in 0..max_iter {
            if r.norm() <= 1e-16 {
                break;
            }
            let (jt, jp) = self.jacobian(x[0], x[1]);
            // normal equations of the 2×2 real system
            let g00 = jt.norm_sqr();
            let g11 = jp.norm_sqr();
            let g01 = (jt.conj() * jp).re;
            let b0 = -(jt.conj() * r).re;
            let b1 = -(jp.conj() * r).re;
            let mut improved = false;
            while lambda < 1e12 {
                let a00 = g00 * (1.0 + lambda) + 1e-14;
                let a11 = g11 * (1.0 + lambda) + 1e-14;
                let det = a00 * a11 - g01 * g01;
                let dx = [(a11 * b0 - g01 * b1) / det, (a00 * b1 - g01 * b0) / det];
                let trial = [x[0] + dx[0], x[1] + dx[1]];
                let rt = self.residual(trial[0], trial[1]);
                if rt.norm() < r.norm() {
                    x = trial;
                    r = rt;
                    lambda = (lambda * 0.1).max(1e-15);
                    improved = true;
                    break;
                }
                lambda *= 10.0;
            }
            if !improved {
                break;
            }
        }
        (x, r.norm())
    }
}

/// Maps any `(θ, φ)` onto `θ ∈ [0, π/2]`, `φ ∈ (−π, π]`.
///
/// `B(−θ, φ) = B(θ, φ+π)` exactly; `(π−θ, φ+π)` negates the single-photon
/// map, which is a global phase on every fixed-photon-number sector.
fn canonical_stage(theta: f64, phi: f64) -> BSParams {
    let mut theta = wrap_phase(theta);
    let mut phi = phi;
    if theta < 0.0 {
        theta = -theta;
        phi += PI;
    }
    if theta > FRAC_PI_2 {
        theta = PI - theta;
        phi += PI;
    }
    BSParams::new(theta.clamp(0.0, FRAC_PI_2), phi).expect("canonical angle is in range")
}

fn solve_stage(
    prev: &RecursionState,
    target: BSParams,
    t: f64,
    opts: &SolverOptions,
    rng: &mut ChaCha8Rng,
) -> std::result::Result<BSParams, f64> {
    let eq = StageEquation::new(prev, target, t);
    if eq.norm == 0.0 || !eq.norm.is_finite() {
        return Err(f64::INFINITY);
    }

    let grid = (0..opts.grid_theta).flat_map(|a| {
        (0..opts.grid_phi).map(move |b| {
            let theta = (a as f64 + 0.5) * FRAC_PI_2 / opts.grid_theta as f64;
            let phi = -PI + (b as f64 + 0.5) * 2.0 * PI / opts.grid_phi as f64;
            [theta, phi]
        })
    });
    let random: Vec<[f64; 2]> = (0..opts.random_starts)
        .map(|_| [rng.random_range(0.0..FRAC_PI_2), rng.random_range(-PI..PI)])
        .collect();
    let starts = std::iter::once([target.theta(), target.phi()])
        .chain(grid)
        .chain(random);

    let mut best = f64::INFINITY;
    for start in starts {
        let (x, _) = eq.levenberg_marquardt(start, opts.max_iterations);
        let stage = canonical_stage(x[0], x[1]);
        let mismatch = match prev.step(stage, t).factor() {
            Ok(achieved) => pair_mismatch(achieved, target),
            Err(_) => f64::INFINITY,
        };
        if mismatch <= opts.tolerance {
            return Ok(stage);
        }
        best = best.min(mismatch);
    }
    Err(best)
}
