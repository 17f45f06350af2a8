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
//! Factorization of a two-mode target into rotated creation operators.
//!
//! A target `Σ C_n |n, N−n⟩` is written as `Σ p_n a†^n b†^{N−n} |0⟩` with
//! `p_n = C_n / √(n!(N−n)!)`. The roots `β_i` of `Σ p_n β^n` give the
//! factorization `p_d · b†^{N−d} · Π (a† − β_i b†) |0⟩`, and every factor is a
//! beam-splitter-rotated `a†` with `cos θ = 1/√(1+|β|²)`, `e^{iφ} = β/|β|`.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{BSParams, FockState};

/// Normalization tolerance for [`TargetSpec`].
pub const TARGET_NORM_TOLERANCE: f64 = 1e-10;

/// Roots closer than this (relative) are treated as one repeated root.
pub const ROOT_CLUSTER_TOLERANCE: f64 = 1e-7;

/// Maximum accepted `|p(β)|` relative to the largest coefficient.
pub const ROOT_RESIDUAL_TOLERANCE: f64 = 1e-9;

/// A normalized two-mode state `Σ_{n=0}^{N} C_n |n⟩_1 |N−n⟩_2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    coefficients: Vec<C64>,
}

impl TargetSpec {
    /// Normalizes `coefficients` (`C_0..C_N`). Requires `N >= 1` and at least
    /// one nonzero entry.
    pub fn new(coefficients: Vec<C64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidTarget(format!(
                "need N >= 1, i.e. at least 2 coefficients (got {})",
                coefficients.len()
            )));
        }
        if coefficients
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidTarget("non-finite coefficient".into()));
        }
        let norm_sq: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq == 0.0 {
            return Err(Error::InvalidTarget("all coefficients are zero".into()));
        }
        let inv = 1.0 / norm_sq.sqrt();
        Ok(TargetSpec {
            coefficients: coefficients.into_iter().map(|c| c * inv).collect(),
        })
    }

    /// `(|0, N⟩ − |N, 0⟩)/√2`.
    pub fn noon(n_total: usize) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::InvalidTarget("NOON state needs N >= 1".into()));
        }
        let mut c = vec![C64::new(0.0, 0.0); n_total + 1];
        c[0] = C64::new(1.0, 0.0);
        c[n_total] = C64::new(-1.0, 0.0);
        Self::new(c)
    }

    pub fn n_total(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    /// The target as a two-mode state with cap `N`.
    pub fn to_state(&self) -> FockState {
        let n = self.n_total() as u32;
        let entries = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| (vec![k as u32, n - k as u32], *c));
        FockState::from_amplitudes(2, n, entries).expect("target kets fit under cap N")
    }
}

/// Roots of the characteristic polynomial together with the ideal rotation
/// angles they imply.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// Finite roots in canonical order (by modulus, then argument).
    pub roots: Vec<C64>,
    /// Vanishing leading coefficients, each a pure `b†` factor.
    pub infinite_roots: usize,
    /// One entry per factor; finite roots first, in `roots` order.
    pub ideal_params: Vec<BSParams>,
    /// `|p_d| Π √(1+|β_i|²)`. Diagnostic only.
    pub scale: f64,
}

impl Decomposition {
    pub fn n_total(&self) -> usize {
        self.roots.len() + self.infinite_roots
    }
}

/// `p_n = C_n / √(n!(N−n)!)`, the coefficient of `β^n`.
pub fn char_poly(target: &TargetSpec) -> Vec<C64> {
    let n = target.n_total();
    target
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, c)| c / (factorial(k) * factorial(n - k)).sqrt())
        .collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn horner(poly: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for c in poly.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All roots of `Σ poly[n] β^n`.
///
/// Returns the finite roots and the number of vanishing leading
/// coefficients (roots at infinity). Exact trailing zeros at the low end give
/// exact zero roots; the rest come from the companion-matrix eigenvalues,
/// polished by Newton steps.
pub fn find_roots(poly: &[C64]) -> Result<(Vec<C64>, usize)> {
    let zero = C64::new(0.0, 0.0);
    let scale = poly.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let top = poly.iter().rposition(|c| *c != zero).unwrap();
    let infinite = poly.len() - 1 - top;
    let low = poly.iter().position(|c| *c != zero).unwrap();

    let mut roots = vec![zero; low];
    let reduced = &poly[low..=top];
    let degree = reduced.len() - 1;
    if degree == 0 {
        return Ok((roots, infinite));
    }

    let eigen = companion_roots(reduced)?;

    let mut found: Vec<C64> = eigen.into_iter().map(|z| polish(reduced, z)).collect();
    merge_clusters(&mut found);

    for beta in &found {
        let (p, _) = horner(reduced, *beta);
        let bound = ROOT_RESIDUAL_TOLERANCE * scale * beta.norm().max(1.0).powi(degree as i32);
        if !p.norm().is_finite() || p.norm() > bound {
            return Err(Error::RootFinding(format!(
                "residual {:e} at root {beta} exceeds {bound:e}",
                p.norm()
            )));
        }
    }
    roots.extend(found);
    Ok((roots, infinite))
}

// Origin shifts tried in turn when QR stalls; highly symmetric root sets such
// as β^N = c give near-cyclic companion matrices.
const ORIGIN_SHIFTS: [C64; 4] = [
    C64::new(0.0, 0.0),
    C64::new(0.137, 0.071),
    C64::new(-0.113, 0.193),
    C64::new(0.251, -0.167),
];

fn companion_roots(poly: &[C64]) -> Result<Vec<C64>> {
    let degree = poly.len() - 1;
    if degree == 1 {
        return Ok(vec![-poly[0] / poly[1]]);
    }
    for shift in ORIGIN_SHIFTS {
        // coefficients of q(z) = p(z + shift)
        let mut q = poly.to_vec();
        for k in 0..degree {
            for j in (k..degree).rev() {
                let carry = q[j + 1] * shift;
                q[j] += carry;
            }
        }
        let lead = q[degree];
        let mut companion = DMatrix::<C64>::zeros(degree, degree);
        for k in 1..degree {
            companion[(k, k - 1)] = C64::new(1.0, 0.0);
        }
        for k in 0..degree {
            companion[(k, degree - 1)] = -q[k] / lead;
        }
        if let Some(schur) = Schur::try_new(companion, f64::EPSILON, 30 * degree) {
            let (_, t) = schur.unpack();
            return Ok((0..degree).map(|k| t[(k, k)] + shift).collect());
        }
    }
    Err(Error::RootFinding(
        "companion QR iteration did not converge".into(),
    ))
}

fn polish(poly: &[C64], mut z: C64) -> C64 {
    let (mut p, _) = horner(poly, z);
    for _ in 0..50 {
        let (_, dp) = horner(poly, z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let (pn, _) = horner(poly, next);
        // stop on no progress, including a NaN step
        if pn.norm().is_nan() || pn.norm() >= p.norm() {
            break;
        }
        z = next;
        p = pn;
    }
    z
}

// Replace each cluster of nearly coincident roots by its centroid.
fn merge_clusters(roots: &mut [C64]) {
    let n = roots.len();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let tol = ROOT_CLUSTER_TOLERANCE * roots[i].norm().max(1.0);
        let members: Vec<usize> = (i..n)
            .filter(|&j| !assigned[j] && (roots[j] - roots[i]).norm() <= tol)
            .collect();
        if members.len() > 1 {
            let centroid = members.iter().map(|&j| roots[j]).sum::<C64>() / members.len() as f64;
            for &j in &members {
                roots[j] = centroid;
            }
        }
        for j in members {
            assigned[j] = true;
        }
    }
}

fn root_order(a: &C64, b: &C64) -> Ordering {
    let key = |z: &C64| {
        let modulus = (z.norm() * 1e9).round() as i64;
        let arg = if z.norm() == 0.0 { 0.0 } else { z.arg() };
        // −π and π describe the same direction
        let arg = if arg <= -std::f64::consts::PI + 1e-9 {
            std::f64::consts::PI
        } else {
            arg
        };
        (modulus, (arg * 1e9).round() as i64)
    };
    key(a).cmp(&key(b))
}

/// Sorts roots into the canonical order: modulus, then argument.
pub fn sort_roots(roots: &mut [C64]) {
    roots.sort_by(root_order);
}

/// Maps a finite root to `(θ, φ)` with `tan θ = |β|`, `φ = arg β`.
pub fn root_to_bs_params(beta: C64) -> BSParams {
    let phi = if beta.norm() == 0.0 { 0.0 } else { beta.arg() };
    BSParams::new(beta.norm().atan(), phi).expect("atan of a modulus lies in [0, π/2)")
}

/// Ideal angles for every factor: finite roots in canonical order, then one
/// `(π/2, 0)` entry per root at infinity.
pub fn roots_to_bs_params(roots: &[C64], infinite_count: usize) -> Vec<BSParams> {
    let mut sorted = roots.to_vec();
    sort_roots(&mut sorted);
    sorted
        .into_iter()
        .map(root_to_bs_params)
        .chain(std::iter::repeat_n(
            BSParams::new(FRAC_PI_2, 0.0).expect("valid angle"),
            infinite_count,
        ))
        .collect()
}

/// Runs [`char_poly`], [`find_roots`] and [`roots_to_bs_params`].
pub fn decompose(target: &TargetSpec) -> Result<Decomposition> {
    let poly = char_poly(target);
    let (mut roots, infinite_roots) = find_roots(&poly)?;
    sort_roots(&mut roots);
    let lead = poly[poly.len() - 1 - infinite_roots].norm();
    let scale = roots
        .iter()
        .fold(lead, |acc, b| acc * (1.0 + b.norm_sqr()).sqrt());
    let ideal_params = roots_to_bs_params(&roots, infinite_roots);
    Ok(Decomposition {
        roots,
        infinite_roots,
        ideal_params,
        scale,
    })
}

/// Applies `b†^{m} Π (a† − β_i b†)` to the two-mode vacuum and normalizes.
pub fn reconstruct_target(decomposition: &Decomposition, n_total: usize) -> Result<FockState> {
    if decomposition.n_total() != n_total {
        return Err(Error::StageCount {
            expected: n_total,
            got: decomposition.n_total(),
        });
    }
    let mut state = FockState::vacuum(2, n_total as u32);
    for beta in &decomposition.roots {
        let along_a = state.add_photon(0)?;
        let along_b = state.add_photon(1)?;
        state = along_a.add_scaled(&along_b, -beta)?;
    }
    for _ in 0..decomposition.infinite_roots {
        state = state.add_photon(1)?;
    }
    state.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fidelity;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    // β^N = c has equally spaced roots on one circle; its companion matrix
    // is nearly a cyclic shift, the classic stall case for shifted QR.
    #[test]
    fn noon_roots_terminate_and_reconstruct() {
        for n in 1..=10 {
            let target = TargetSpec::noon(n).unwrap();
            let d = decompose(&target).unwrap();
            assert_eq!(d.roots.len() + d.infinite_roots, n);
            for r in &d.roots {
                assert!(
                    (r.norm() - 1.0).abs() < 1e-9,
                    "N = {n}: |beta| = {}",
                    r.norm()
                );
            }
            let f = fidelity(&reconstruct_target(&d, n).unwrap(), &target.to_state()).unwrap();
            assert!(f > 1.0 - 1e-10, "N = {n}: fidelity {f}");
        }
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_target(rng: &mut impl Rng, n: usize) -> TargetSpec {
        let coeffs = (0..=n)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        TargetSpec::new(coeffs).unwrap()
    }

    // Coefficients of Π (x − β_i y) as a polynomial in x (index = power of x).
    fn expand_product(roots: &[C64]) -> Vec<C64> {
        let mut coeffs = vec![c(1.0, 0.0)];
        for beta in roots {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * beta;
            }
            coeffs = next;
        }
        coeffs
    }

    fn contains_root(roots: &[C64], z: C64) -> bool {
        roots.iter().any(|r| (r - z).norm() < 1e-12)
    }

    #[test]
    fn target_validation() {
        assert!(TargetSpec::new(vec![c(1.0, 0.0)]).is_err());
        assert!(TargetSpec::new(vec![c(0.0, 0.0); 3]).is_err());
        let t = TargetSpec::new(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        let norm: f64 = t.coefficients().iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < TARGET_NORM_TOLERANCE);
    }

    #[test]
    fn char_poly_examples() {
        let fock3 =
            TargetSpec::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let p = char_poly(&fock3);
        assert_eq!(&p[..3], &[c(0.0, 0.0); 3]);
        assert!((p[3] - c(1.0 / 6f64.sqrt(), 0.0)).norm() < 1e-15);

        let p = char_poly(&TargetSpec::noon(4).unwrap());
        let k = 1.0 / (2f64.sqrt() * 24f64.sqrt());
        assert!((p[0] - c(k, 0.0)).norm() < 1e-15);
        assert!((p[4] - c(-k, 0.0)).norm() < 1e-15);
        assert!(p[1..4].iter().all(|z| z.norm() == 0.0));

        let bell = TargetSpec::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let p = char_poly(&bell);
        assert!((p[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((p[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn find_roots_examples() {
        let (roots, inf) = find_roots(&char_poly(&TargetSpec::noon(4).unwrap())).unwrap();
        assert_eq!(inf, 0);
        assert_eq!(roots.len(), 4);
        for z in [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)] {
            assert!(contains_root(&roots, z), "{z} missing from {roots:?}");
        }

        let (roots, inf) =
            find_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.4, 0.0)]).unwrap();
        assert_eq!((roots, inf), (vec![c(0.0, 0.0); 3], 0));

        let (roots, inf) =
            find_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(roots.is_empty());
        assert_eq!(inf, 3);

        assert_eq!(find_roots(&[c(0.0, 0.0); 4]), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn repeated_roots_are_recovered() {
        // (β − 0.5)^3 (β + 2i)
        let poly = {
            let mut p = expand_product(&[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.0, -2.0)]);
            p.iter_mut().for_each(|z| *z *= 0.3);
            p
        };
        let (roots, inf) = find_roots(&poly).unwrap();
        assert_eq!(inf, 0);
        assert_eq!(
            roots
                .iter()
                .filter(|r| (*r - c(0.5, 0.0)).norm() < 1e-4)
                .count(),
            3
        );
        assert!(contains_root(&roots, c(0.0, -2.0)));
    }

    #[test]
    fn angle_map_examples() {
        let p = root_to_bs_params(c(1.0, 0.0));
        assert!((p.theta() - FRAC_PI_4).abs() < 1e-15 && p.phi() == 0.0);
        assert_eq!(root_to_bs_params(c(0.0, 0.0)), BSParams::identity());
        let p = root_to_bs_params(c(0.0, 1.0));
        assert!((p.theta() - FRAC_PI_4).abs() < 1e-15 && (p.phi() - FRAC_PI_2).abs() < 1e-15);

        let params = roots_to_bs_params(&[c(0.0, 2.0)], 2);
        assert_eq!(params.len(), 3);
        assert_eq!(params[1], BSParams::new(FRAC_PI_2, 0.0).unwrap());
    }

    #[test]
    fn angle_relations_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let beta = c(rng.sample(StandardNormal), rng.sample(StandardNormal));
            let p = root_to_bs_params(beta);
            assert!((p.theta().cos() - 1.0 / (1.0 + beta.norm_sqr()).sqrt()).abs() < 1e-12);
            assert!((C64::from_polar(1.0, p.phi()) - beta / beta.norm()).norm() < 1e-12);
        }
    }

    #[test]
    fn canonical_order_is_deterministic() {
        let mut a = vec![
            c(0.0, -1.0),
            c(-1.0, -1e-17),
            c(1.0, 0.0),
            c(0.0, 1.0),
            c(0.5, 0.0),
        ];
        let mut b = a.clone();
        b.reverse();
        sort_roots(&mut a);
        sort_roots(&mut b);
        assert_eq!(a[0], c(0.5, 0.0));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn reconstruct_examples() {
        let fock3 = Decomposition {
            roots: vec![c(0.0, 0.0); 3],
            infinite_roots: 0,
            ideal_params: roots_to_bs_params(&[c(0.0, 0.0); 3], 0),
            scale: 1.0,
        };
        let s = reconstruct_target(&fock3, 3).unwrap();
        assert!((s.amplitude(&[3, 0]).norm() - 1.0).abs() < 1e-15);

        let noon = TargetSpec::noon(4).unwrap();
        let d = decompose(&noon).unwrap();
        let s = reconstruct_target(&d, 4).unwrap();
        assert!(1.0 - fidelity(&s, &noon.to_state()).unwrap() < 1e-12);

        let mut reversed = d.clone();
        reversed.roots.reverse();
        let r = reconstruct_target(&reversed, 4).unwrap();
        assert!(1.0 - fidelity(&s, &r).unwrap() < 1e-10);
    }

    #[test]
    fn noon_product_expands_to_difference_of_powers() {
        // (x − y)(x − iy)(x + y)(x + iy) = x⁴ − y⁴
        let p = expand_product(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]);
        let expect = [
            c(-1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ];
        for (a, b) in p.iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn round_trip_random_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for n in 1..=6 {
            for _ in 0..20 {
                let t = random_target(&mut rng, n);
                let d = decompose(&t).unwrap();
                assert_eq!(d.n_total(), n);
                let s = reconstruct_target(&d, n).unwrap();
                assert!(1.0 - fidelity(&s, &t.to_state()).unwrap() <= 1e-8);

                let poly = char_poly(&t);
                let lead = poly[n];
                let expanded = expand_product(&d.roots);
                let max = poly.iter().map(|z| z.norm()).fold(0.0, f64::max);
                for (a, b) in expanded.iter().zip(&poly) {
                    assert!((a * lead - b).norm() <= 1e-8 * max);
                }
                for beta in &d.roots {
                    assert!(horner(&poly, *beta).0.norm() <= ROOT_RESIDUAL_TOLERANCE * max);
                }
            }
        }
    }

    #[test]
    fn degenerate_end_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in 2..=5 {
            for (zero_low, zero_high) in [(true, false), (false, true), (true, true)] {
                let mut coeffs: Vec<C64> = (0..=n)
                    .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect();
                if zero_low {
                    coeffs[0] = c(0.0, 0.0);
                }
                if zero_high {
                    coeffs[n] = c(0.0, 0.0);
                }
                let t = TargetSpec::new(coeffs).unwrap();
                let d = decompose(&t).unwrap();
                assert_eq!(d.infinite_roots, usize::from(zero_high));
                assert_eq!(d.ideal_params.len(), n);
                let s = reconstruct_target(&d, n).unwrap();
                assert!(1.0 - fidelity(&s, &t.to_state()).unwrap() <= 1e-8);
            }
        }
    }
}
