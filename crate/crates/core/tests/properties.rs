// Copyright 2026 The tailqae Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Property-based invariants: norm preservation, transpiler equivalence,
//! bin normalization, de-amplification round trips, budget accounting,
//! estimator unbiasedness, and fit recovery.

mod common;

use proptest::prelude::*;
use tailqae::baselines::{
    binned_mc, conditional_tail_mc, importance_sampling_mc, naive_mc, qmc_sobol,
};
use tailqae::dist::{
    analytic_excess, discretize, exact_on_bins, fit_lognormal, BinningScheme, LognormalParams,
    LossSource,
};
use tailqae::oracle::deamplify;
use tailqae::qsim::{simulate, transpile_to_basis, Circuit, Gate};

/// A random gate over n qubits, all ten kinds reachable.
fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    let qubit = 0..n;
    (qubit, proptest::bits::u8::ANY, -3.2f64..3.2, proptest::collection::vec(0..n, 0..n))
        .prop_map(move |(target, kind, angle, mut pool)| {
            pool.retain(|&q| q != target);
            pool.dedup();
            // Distinct controls only.
            let mut controls = Vec::new();
            for q in pool {
                if !controls.contains(&q) {
                    controls.push(q);
                }
            }
            match kind % 10 {
                0 => Gate::ry(target, angle),
                1 => Gate::h(target),
                2 => Gate::z(target),
                3 => Gate::x(target),
                4 => Gate::rz(target, angle),
                5 => Gate::sx(target),
                6 if !controls.is_empty() => Gate::cry(controls[0], target, angle),
                7 if !controls.is_empty() => Gate::cx(controls[0], target),
                8 if !controls.is_empty() => Gate::mcry(controls, target, angle),
                9 if !controls.is_empty() => Gate::mcx(controls, target),
                _ => Gate::ry(target, angle),
            }
        })
}

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (2usize..5)
        .prop_flat_map(|n| {
            proptest::collection::vec(arb_gate(n), 1..16).prop_map(move |gates| {
                let mut c = Circuit::new(n, "prop");
                for g in gates {
                    c.push(g).unwrap();
                }
                c
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_preserved_by_any_circuit(circuit in arb_circuit()) {
        let state = simulate(&circuit).unwrap();
        prop_assert!((state.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn transpiled_circuit_is_equivalent(circuit in arb_circuit(), seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let transpiled = transpile_to_basis(&circuit).unwrap();
        prop_assert!(transpiled.is_basis_only());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut amps: Vec<num_complex::Complex64> = (0..1usize << circuit.num_qubits)
            .map(|_| num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        let start = tailqae::qsim::Statevector::from_amplitudes(amps).unwrap();
        let mut a = start.clone();
        for g in &circuit.gates { a.apply(g).unwrap(); }
        let mut b = start;
        for g in &transpiled.circuit.gates { b.apply(g).unwrap(); }
        prop_assert!((a.fidelity(&b) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bin_masses_always_normalized(
        mu in 5.0f64..14.0,
        sigma in 0.2f64..2.5,
        n in 1u32..9,
        scheme_pick in 0u8..3,
    ) {
        let scheme = match scheme_pick {
            0 => BinningScheme::EqualWidth,
            1 => BinningScheme::Quantile,
            _ => BinningScheme::LogSpaced,
        };
        let p = LognormalParams::new(mu, sigma).unwrap();
        let b = discretize(LossSource::Fitted(&p), scheme, n).unwrap();
        let total: f64 = b.probs.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        b.validate().unwrap();
    }

    #[test]
    fn deamplify_inverts_amplification(p in 1e-6f64..0.2, k in 0u32..12) {
        let theta = p.sqrt().asin();
        // Only meaningful inside the safe window.
        prop_assume!((2 * k + 1) as f64 * theta < std::f64::consts::FRAC_PI_2);
        let amplified = ((2 * k + 1) as f64 * theta).sin().powi(2);
        let back = deamplify(amplified, k);
        prop_assert!((back - p).abs() < 1e-12);
    }

    #[test]
    fn estimators_consume_exact_budget(budget in 1u64..2000, seed in 0u64..500, m in 10_000f64..2_000_000.0) {
        let p = LognormalParams::new(11.4845, 0.667).unwrap();
        let b = discretize(LossSource::Fitted(&p), BinningScheme::EqualWidth, 3).unwrap();
        for r in [
            naive_mc(&p, m, budget, seed),
            conditional_tail_mc(&p, m, budget, seed),
            importance_sampling_mc(&p, m, budget, seed),
            qmc_sobol(&p, m, budget, seed),
            binned_mc(&b, m, budget, seed),
        ] {
            prop_assert_eq!(r.queries, budget, "{}", r.estimator);
            prop_assert!(r.estimate.is_finite());
            prop_assert!(r.estimate >= 0.0);
        }
    }

    #[test]
    fn excess_loss_decreases_with_threshold(
        mu in 6.0f64..13.0,
        sigma in 0.3f64..2.2,
        u1 in 0.1f64..0.9,
        u2 in 0.1f64..0.9,
    ) {
        let p = LognormalParams::new(mu, sigma).unwrap();
        let (m1, m2) = (p.inv_cdf(u1.min(u2)).unwrap(), p.inv_cdf(u1.max(u2)).unwrap());
        prop_assume!(m2 > m1);
        prop_assert!(analytic_excess(&p, m2) <= analytic_excess(&p, m1) + 1e-9);
    }
}

/// Mean of each sampling estimator over 200 repetitions must sit within
/// three combined standard errors of its ground truth.
#[test]
fn estimators_are_unbiased() {
    let p = LognormalParams::new(11.4845, 0.667).unwrap();
    let bins = discretize(LossSource::Fitted(&p), BinningScheme::EqualWidth, 3).unwrap();
    let m = 362_700.0;
    let analytic = analytic_excess(&p, m);
    let bins_truth = exact_on_bins(&bins, m);
    let (reps, budget) = (200u64, 2048u64);

    let check = |name: &str, truth: f64, estimates: Vec<f64>| {
        let n = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / n;
        let sd =
            (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let se = sd / n.sqrt();
        assert!(
            (mean - truth).abs() < 3.0 * se,
            "{name}: mean {mean} vs truth {truth} (se {se})"
        );
    };

    check("naive", analytic, (0..reps).map(|r| naive_mc(&p, m, budget, 10_000 + r).estimate).collect());
    check(
        "conditional_tail",
        analytic,
        (0..reps).map(|r| conditional_tail_mc(&p, m, budget, 20_000 + r).estimate).collect(),
    );
    check(
        "importance_sampling",
        analytic,
        (0..reps).map(|r| importance_sampling_mc(&p, m, budget, 30_000 + r).estimate).collect(),
    );
    check(
        "binned_mc",
        bins_truth,
        (0..reps).map(|r| binned_mc(&bins, m, budget, 40_000 + r).estimate).collect(),
    );
}

/// End to end through the transpiler: the fully amplified estimation
/// circuit, rewritten into the hardware basis, reads out the same ancilla
/// probability as the logical circuit.
#[test]
fn transpiled_qae_circuit_preserves_readout() {
    use tailqae::oracle::{build_oracle, build_qae_circuit};
    let p = common::synthetic_params();
    let bins = discretize(LossSource::Fitted(&p), BinningScheme::EqualWidth, 3).unwrap();
    let oracle = build_oracle(&bins, common::SYNTHETIC_M95).unwrap();
    let theta = oracle.true_readout_prob.sqrt().asin();
    for k in [0u32, 3, 6] {
        let circuit = build_qae_circuit(&oracle, k);
        let basis = transpile_to_basis(&circuit).unwrap();
        let state = simulate(&basis.circuit).unwrap();
        let got = state.prob_qubit_one(3);
        let want = ((2 * k + 1) as f64 * theta).sin().powi(2);
        assert!((got - want).abs() < 1e-9, "k={k}: {got} vs {want}");
    }
}

/// The severity model of the synthetic pipeline: fitting a lognormal to the
/// seeded Pareto draws lands on the pinned reference parameters.
#[test]
fn pareto_fit_reproduces_reference_parameters() {
    let data = common::synthetic_dataset();
    let fit = fit_lognormal(&data.losses).unwrap();
    assert!((fit.mu - 11.49).abs() < 0.02, "mu = {}", fit.mu);
    assert!((fit.sigma - 0.67).abs() < 0.02, "sigma = {}", fit.sigma);
}

/// MLE recovery on true lognormal draws: fitted parameters land within
/// three standard errors of the generator's.
#[test]
fn fit_recovers_lognormal_parameters() {
    use rand::{Rng, SeedableRng};
    let (mu, sigma) = (9.5f64, 1.4f64);
    let n = 50_000usize;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let p = LognormalParams::new(mu, sigma).unwrap();
    let samples: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>().clamp(1e-12, 1.0 - 1e-12);
            p.inv_cdf(u).unwrap()
        })
        .collect();
    let fit = fit_lognormal(&samples).unwrap();
    let se_mu = sigma / (n as f64).sqrt();
    let se_sigma = sigma / (2.0 * n as f64).sqrt();
    assert!((fit.mu - mu).abs() < 3.0 * se_mu, "mu {} vs {mu}", fit.mu);
    assert!((fit.sigma - sigma).abs() < 3.0 * se_sigma, "sigma {} vs {sigma}", fit.sigma);
}

/// Log-spaced bins beat equal-width bins on discretization error for the
/// synthetic tail configuration at n >= 4.
#[test]
fn log_spaced_discretization_dominates_at_higher_resolution() {
    let p = common::synthetic_params();
    let truth = analytic_excess(&p, common::SYNTHETIC_M95);
    for n in 4..=6u32 {
        let eq = discretize(LossSource::Fitted(&p), BinningScheme::EqualWidth, n).unwrap();
        let ls = discretize(LossSource::Fitted(&p), BinningScheme::LogSpaced, n).unwrap();
        let de = (exact_on_bins(&eq, common::SYNTHETIC_M95) - truth).abs();
        let dl = (exact_on_bins(&ls, common::SYNTHETIC_M95) - truth).abs();
        assert!(dl < de, "n={n}: log-spaced {dl} vs equal-width {de}");
    }
}
