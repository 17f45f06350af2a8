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
//! Sparse multi-mode Fock states with a total photon cap.
//!
//! States are immutable values. Every operation returns a fresh state, so the
//! same input can be fed to several circuits (or threads) at once.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative magnitude below which amplitudes are dropped after an operation.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Squared-norm tolerance for a state to count as normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Occupation numbers `(n_1, ..., n_M)` of a single basis ket.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn new(counts: Vec<u32>) -> Self {
        Occupation(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, mode: usize) -> u32 {
        self.0[mode]
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (k, n) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Beam splitter angles for
/// `B(θ, φ) = exp(θ e^{-iφ} a†b − θ e^{iφ} a b†)`.
///
/// With this convention `B a† B† = cos θ a† − e^{iφ} sin θ b†` and
/// `B b† B† = e^{−iφ} sin θ a† + cos θ b†`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BSParams {
    theta: f64,
    phi: f64,
}

impl BSParams {
    /// Validates `0 <= theta <= π/2` and wraps `phi` into `(−π, π]`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() || !(0.0..=FRAC_PI_2 + 1e-12).contains(&theta) {
            return Err(Error::InvalidAngle(theta));
        }
        Ok(BSParams {
            theta: theta.min(FRAC_PI_2),
            phi: wrap_phase(phi),
        })
    }

    pub fn identity() -> Self {
        BSParams {
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// The 50:50 splitter with phase `phi`.
    pub fn symmetric(phi: f64) -> Self {
        BSParams {
            theta: FRAC_PI_2 / 2.0,
            phi: wrap_phase(phi),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `B(θ, φ)† = B(−θ, φ) = B(θ, φ + π)`.
    pub fn inverse(&self) -> Self {
        BSParams {
            theta: self.theta,
            phi: wrap_phase(self.phi + PI),
        }
    }
}

/// Reduces a phase to `(−π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// The `(n+1)×(n+1)` block of `B(θ, φ)` acting on kets `|k, n−k⟩` of the
/// mode pair, indexed by `k`.
///
/// The anti-Hermitian generator `G` is built from ladder matrix elements and
/// exponentiated through the eigen-decomposition of `H = iG`:
/// `exp(G) = V exp(−iΛ) V†`.
pub fn beamsplitter_block(n: u32, params: BSParams) -> DMatrix<C64> {
    let dim = n as usize + 1;
    if params.theta == 0.0 || n == 0 {
        return DMatrix::identity(dim, dim);
    }
    let up = C64::from_polar(params.theta, -params.phi);
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    for k in 0..n as usize {
        // a†b: |k, n−k⟩ → √((k+1)(n−k)) |k+1, n−k−1⟩
        let g = up * (((k + 1) * (n as usize - k)) as f64).sqrt();
        h[(k + 1, k)] = C64::i() * g;
        h[(k, k + 1)] = (C64::i() * g).conj();
    }
    let eig = SymmetricEigen::new(h);
    let phases =
        DMatrix::from_diagonal(&eig.eigenvalues.map(|lambda| C64::from_polar(1.0, -lambda)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// A pure state of `modes` bosonic modes holding at most `cap` photons in
/// total, stored as a sparse map from occupation to amplitude.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    modes: usize,
    cap: u32,
    amps: BTreeMap<Occupation, C64>,
}

impl FockState {
    /// The vacuum `|0, ..., 0⟩`.
    pub fn vacuum(modes: usize, cap: u32) -> Self {
        assert!(modes >= 1, "a Fock state needs at least one mode");
        let mut amps = BTreeMap::new();
        amps.insert(Occupation(vec![0; modes]), C64::new(1.0, 0.0));
        FockState { modes, cap, amps }
    }

    /// The normalized basis ket with the given occupation.
    pub fn basis(cap: u32, counts: &[u32]) -> Result<Self> {
        Self::from_amplitudes(counts.len(), cap, [(counts.to_vec(), C64::new(1.0, 0.0))])
    }

    /// Builds a state from explicit `(occupation, amplitude)` entries.
    /// Repeated occupations are summed.
    pub fn from_amplitudes<I>(modes: usize, cap: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C64)>,
    {
        if modes == 0 {
            return Err(Error::Incompatible(
                "a Fock state needs at least one mode".into(),
            ));
        }
        let mut amps = BTreeMap::new();
        for (counts, amp) in entries {
            if counts.len() != modes {
                return Err(Error::Incompatible(format!(
                    "occupation {counts:?} does not have {modes} modes"
                )));
            }
            let occ = Occupation(counts);
            if occ.total() > cap {
                return Err(Error::Incompatible(format!(
                    "occupation {occ} exceeds cap {cap}"
                )));
            }
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::Incompatible(format!(
                    "non-finite amplitude on {occ}"
                )));
            }
            *amps.entry(occ).or_insert(C64::new(0.0, 0.0)) += amp;
        }
        Ok(FockState { modes, cap, amps }.pruned())
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, counts: &[u32]) -> C64 {
        self.amps
            .get(&Occupation(counts.to_vec()))
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &C64)> {
        self.amps.iter()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sq() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / n.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let amps = self
            .amps
            .iter()
            .map(|(k, a)| (k.clone(), a * factor))
            .collect();
        FockState {
            modes: self.modes,
            cap: self.cap,
            amps,
        }
        .pruned()
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, other: &FockState, factor: C64) -> Result<Self> {
        self.check_compatible(other)?;
        let mut amps = self.amps.clone();
        for (k, a) in &other.amps {
            *amps.entry(k.clone()).or_insert(C64::new(0.0, 0.0)) += a * factor;
        }
        Ok(FockState {
            modes: self.modes,
            cap: self.cap,
            amps,
        }
        .pruned())
    }

    /// Same amplitudes under a larger (or equal) photon cap.
    pub fn with_cap(&self, cap: u32) -> Result<Self> {
        if self.amps.keys().any(|k| k.total() > cap) {
            return Err(Error::Incompatible(format!(
                "state does not fit under cap {cap}"
            )));
        }
        Ok(FockState {
            modes: self.modes,
            cap,
            amps: self.amps.clone(),
        })
    }

    /// Tensors a new mode holding `photons` photons onto the end of the
    /// state, raising the cap by the same amount.
    pub fn append_mode(&self, photons: u32) -> Self {
        let amps = self
            .amps
            .iter()
            .map(|(k, a)| {
                let mut counts = k.0.clone();
                counts.push(photons);
                (Occupation(counts), *a)
            })
            .collect();
        FockState {
            modes: self.modes + 1,
            cap: self.cap + photons,
            amps,
        }
    }

    /// Drops a mode that is empty on every stored ket.
    pub fn remove_vacuum_mode(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        if self.modes == 1 {
            return Err(Error::Incompatible("cannot remove the only mode".into()));
        }
        if self.amps.keys().any(|k| k.0[mode] != 0) {
            return Err(Error::Incompatible(format!("mode {mode} is not in vacuum")));
        }
        let amps = self
            .amps
            .iter()
            .map(|(k, a)| {
                let mut counts = k.0.clone();
                counts.remove(mode);
                (Occupation(counts), *a)
            })
            .collect();
        Ok(FockState {
            modes: self.modes - 1,
            cap: self.cap,
            amps,
        })
    }

    /// Creation operator on `mode`: `a†|n⟩ = √(n+1)|n+1⟩`.
    ///
    /// Exceeding the cap is an error rather than a silent truncation.
    pub fn add_photon(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let mut amps = BTreeMap::new();
        for (k, a) in &self.amps {
            if k.total() >= self.cap {
                return Err(Error::PhotonCapExceeded {
                    mode,
                    cap: self.cap,
                });
            }
            let mut counts = k.0.clone();
            let n = counts[mode];
            counts[mode] = n + 1;
            amps.insert(Occupation(counts), a * f64::from(n + 1).sqrt());
        }
        Ok(FockState {
            modes: self.modes,
            cap: self.cap,
            amps,
        })
    }

    /// Applies `B(θ, φ)` with `mode_i` as `a` and `mode_j` as `b`.
    pub fn apply_beamsplitter(
        &self,
        mode_i: usize,
        mode_j: usize,
        params: BSParams,
    ) -> Result<Self> {
        self.check_mode(mode_i)?;
        self.check_mode(mode_j)?;
        if mode_i == mode_j {
            return Err(Error::SameMode(mode_i));
        }
        if params.theta == 0.0 {
            return Ok(self.clone());
        }

        let mut blocks: HashMap<u32, DMatrix<C64>> = HashMap::new();
        let mut amps: BTreeMap<Occupation, C64> = BTreeMap::new();
        for (k, a) in &self.amps {
            let ni = k.0[mode_i];
            let n = ni + k.0[mode_j];
            let u = blocks
                .entry(n)
                .or_insert_with(|| beamsplitter_block(n, params));
            let col = ni as usize;
            for row in 0..=n {
                let amp = u[(row as usize, col)] * a;
                if amp == C64::new(0.0, 0.0) {
                    continue;
                }
                let mut counts = k.0.clone();
                counts[mode_i] = row;
                counts[mode_j] = n - row;
                *amps.entry(Occupation(counts)).or_insert(C64::new(0.0, 0.0)) += amp;
            }
        }
        Ok(FockState {
            modes: self.modes,
            cap: self.cap,
            amps,
        }
        .pruned())
    }

    /// Multiplies every amplitude by `t^{n_mode}`.
    pub fn apply_attenuation(&self, mode: usize, t: C64) -> Result<Self> {
        self.check_mode(mode)?;
        let amps = self
            .amps
            .iter()
            .map(|(k, a)| (k.clone(), a * t.powu(k.0[mode])))
            .collect();
        Ok(FockState {
            modes: self.modes,
            cap: self.cap,
            amps,
        }
        .pruned())
    }

    /// Keeps only the kets with no photon in `mode`. The result is left
    /// unnormalized; its squared norm is the probability of a zero count.
    pub fn project_zero(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let amps = self
            .amps
            .iter()
            .filter(|(k, _)| k.0[mode] == 0)
            .map(|(k, a)| (k.clone(), *a))
            .collect();
        Ok(FockState {
            modes: self.modes,
            cap: self.cap,
            amps,
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockState) -> Result<C64> {
        self.check_compatible(other)?;
        let mut acc = C64::new(0.0, 0.0);
        for (k, a) in &self.amps {
            if let Some(b) = other.amps.get(k) {
                acc += a.conj() * b;
            }
        }
        Ok(acc)
    }

    /// Total photon numbers present in the state.
    pub fn photon_numbers(&self) -> Vec<u32> {
        let mut totals: Vec<u32> = self.amps.keys().map(Occupation::total).collect();
        totals.sort_unstable();
        totals.dedup();
        totals
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes {
            return Err(Error::InvalidMode {
                mode,
                modes: self.modes,
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &FockState) -> Result<()> {
        if self.modes != other.modes || self.cap != other.cap {
            return Err(Error::Incompatible(format!(
                "({} modes, cap {}) vs ({} modes, cap {})",
                self.modes, self.cap, other.modes, other.cap
            )));
        }
        Ok(())
    }

    fn pruned(mut self) -> Self {
        let max = self.amps.values().map(|a| a.norm()).fold(0.0, f64::max);
        let floor = max * PRUNE_THRESHOLD;
        self.amps.retain(|_, a| a.norm() > floor);
        self
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.amps.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, a)) in self.amps.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){k}", a.re, a.im)?;
        }
        Ok(())
    }
}

/// `|⟨a|b⟩|² / (‖a‖² ‖b‖²)`; invariant under global phase and scale.
pub fn fidelity(a: &FockState, b: &FockState) -> Result<f64> {
    let na = a.norm_sq();
    let nb = b.norm_sq();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let overlap = a.inner(b)?;
    Ok((overlap.norm_sqr() / (na * nb)).clamp(0.0, 1.0))
}
