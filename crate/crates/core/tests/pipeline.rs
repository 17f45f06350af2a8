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
use std::f64::consts::FRAC_1_SQRT_2;

use fockchain::circuit::run_chain;
use fockchain::compiler::{angle_mismatch, effective_params, solve_scheme};
use fockchain::decompose::{decompose, reconstruct_target, TargetSpec};
use fockchain::fock::fidelity;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn target_strategy(max_n: usize) -> impl Strategy<Value = TargetSpec> {
    (1..=max_n)
        .prop_flat_map(|n| prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n + 1))
        .prop_filter_map("nonzero", |v| {
            TargetSpec::new(v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).ok()
        })
}

fn fixed_suite() -> Vec<TargetSpec> {
    let raw: [&[(f64, f64)]; 5] = [
        &[(0.2, -0.4), (0.9, 0.1)],
        &[(0.0, 0.0), (0.3, 0.3), (-0.5, 0.2)],
        &[(0.6, 0.0), (0.0, 0.0), (0.0, -0.7), (0.0, 0.0)],
        &[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0)],
        &[
            (0.1, 0.2),
            (-0.3, 0.4),
            (0.5, -0.6),
            (0.7, 0.8),
            (-0.9, 0.05),
        ],
    ];
    raw.iter()
        .map(|c| TargetSpec::new(c.iter().map(|&(re, im)| C64::new(re, im)).collect()).unwrap())
        .collect()
}

#[test]
fn fidelity_does_not_depend_on_transmittance() {
    for target in fixed_suite() {
        let d = decompose(&target).unwrap();
        let mut probabilities = Vec::new();
        for t in [0.3, FRAC_1_SQRT_2, 0.9] {
            let scheme = solve_scheme(&d.ideal_params, t).unwrap();
            let out = run_chain(&scheme, Some(&target)).unwrap();
            assert!(out.fidelity_vs_target.unwrap() >= 1.0 - 1e-8);
            probabilities.push(out.success_probability);
        }
        if target.n_total() > 1 {
            assert!((probabilities[0] - probabilities[2]).abs() > 1e-6);
        }
    }
}

#[test]
fn success_probability_shrinks_stage_by_stage() {
    for target in fixed_suite() {
        let d = decompose(&target).unwrap();
        let out = run_chain(&solve_scheme(&d.ideal_params, 0.6).unwrap(), None).unwrap();
        let mut running = 1.0;
        for p in &out.stage_probabilities {
            assert!(*p <= 1.0);
            let next = running * p;
            assert!(next <= running);
            running = next;
        }
        assert!((running - out.raw_norm_sq).abs() <= 1e-12);
    }
}

#[test]
fn uniform_superposition_compiles() {
    let target = TargetSpec::new(vec![C64::new(1.0, 0.0); 6]).unwrap();
    let d = decompose(&target).unwrap();
    assert!(d.roots.iter().all(|b| b.norm() > 0.0));
    let out = run_chain(
        &solve_scheme(&d.ideal_params, FRAC_1_SQRT_2).unwrap(),
        Some(&target),
    )
    .unwrap();
    assert!(out.fidelity_vs_target.unwrap() >= 1.0 - 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_round_trips(target in target_strategy(6)) {
        let d = decompose(&target).unwrap();
        let s = reconstruct_target(&d, target.n_total()).unwrap();
        prop_assert!(fidelity(&s, &target.to_state()).unwrap() >= 1.0 - 1e-8);
    }

    #[test]
    fn compiled_chain_matches_target(target in target_strategy(5), t in 0.15f64..0.95) {
        let d = decompose(&target).unwrap();
        let scheme = solve_scheme(&d.ideal_params, t).unwrap();
        prop_assert!(angle_mismatch(&effective_params(&scheme).unwrap().pairs, &d.ideal_params) <= 1e-9);
        let out = run_chain(&scheme, Some(&target)).unwrap();
        prop_assert!(out.fidelity_vs_target.unwrap() >= 1.0 - 1e-8);
    }
}
