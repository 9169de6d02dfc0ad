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

//! Amplitude-encoding oracle construction and the Grover-boosted estimator.
//!
//! The oracle `A` acts on n index qubits plus one ancilla (qubit n). Stage 1
//! loads bin probabilities into amplitudes with a binary tree of RY
//! rotations; stage 2 rotates the ancilla by `2 asin(sqrt(payoff_i))` for
//! each bin whose midpoint exceeds the threshold, so the ancilla |1>
//! probability equals the normalized expected excess loss. k applications
//! of the Grover operator `Q = A S0 A^dag S_chi` amplify that probability
//! to `sin^2((2k+1) theta)`, inverted after measurement by [`deamplify`].

use crate::baselines::{EstimatorId, EstimatorResult};
use crate::dist::BinnedDistribution;
use crate::qsim::{
    noisy_execute, sample_shots, simulate, Circuit, Gate, NoisePreset, QsimError, Statevector,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("negative bin probability {0}")]
    NegativeProbability(f64),
    #[error("bin probabilities sum to {0}, expected 1")]
    Unnormalized(f64),
    #[error("grover_k = {requested} exceeds k_max = {k_max} for readout probability {p}")]
    KTooLarge { requested: u32, k_max: u32, p: f64 },
    #[error("readout probability {0} outside [0, 1]")]
    BadReadout(f64),
    #[error("simulation failed: {0}")]
    Sim(#[from] QsimError),
}

/// The oracle for one (distribution, threshold) pair.
#[derive(Debug, Clone)]
pub struct OracleSpec {
    pub binned: BinnedDistribution,
    pub threshold_m: f64,
    /// Largest raw payoff `max_j max(0, x_j - M)`; zero when the threshold
    /// clears every midpoint.
    pub f_max: f64,
    /// Payoffs scaled into [0, 1].
    pub normalized_payoff: Vec<f64>,
    /// State preparation plus payoff rotations, on n+1 qubits.
    pub circuit_a: Circuit,
    /// `sum_i p_i * payoff_i`, the exact ancilla |1> probability.
    pub true_readout_prob: f64,
}

impl OracleSpec {
    pub fn num_index_qubits(&self) -> usize {
        self.binned.n_qubits as usize
    }

    /// Ancilla qubit index.
    pub fn ancilla(&self) -> usize {
        self.binned.n_qubits as usize
    }

    /// True when no midpoint exceeds the threshold; the excess is exactly
    /// zero and amplification is undefined.
    pub fn is_degenerate(&self) -> bool {
        self.f_max == 0.0
    }
}

/// Emit a rotation conditioned on `controls` reading the bit pattern
/// `pattern` (X-conjugating the zero bits), appending to `gates`.
fn push_pattern_controlled_ry(
    gates: &mut Vec<Gate>,
    controls: &[usize],
    pattern: usize,
    target: usize,
    angle: f64,
) {
    let zero_bits: Vec<usize> = controls
        .iter()
        .enumerate()
        .filter(|(j, _)| pattern & (1 << j) == 0)
        .map(|(_, &q)| q)
        .collect();
    for &q in &zero_bits {
        gates.push(Gate::x(q));
    }
    match controls.len() {
        0 => gates.push(Gate::ry(target, angle)),
        1 => gates.push(Gate::cry(controls[0], target, angle)),
        _ => gates.push(Gate::mcry(controls.to_vec(), target, angle)),
    }
    for &q in &zero_bits {
        gates.push(Gate::x(q));
    }
}

/// Build the state-preparation circuit mapping |0...0> to
/// `sum_i sqrt(p_i) |i>` with a binary tree of controlled RY rotations.
///
/// The top-level rotation on the most significant qubit splits the total
/// mass between the lower and upper halves; each deeper level conditions on
/// the already-prepared higher qubits. Zero-mass subtrees emit no gates.
pub fn build_state_prep(binned: &BinnedDistribution) -> Result<Circuit, OracleError> {
    let probs = &binned.probs;
    for &p in probs {
        if p < 0.0 {
            return Err(OracleError::NegativeProbability(p));
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(OracleError::Unnormalized(total));
    }

    let n = binned.n_qubits as usize;
    let mut circuit = Circuit::new(n, format!("state_prep_n{n}"));

    for level in 0..n {
        // Qubit holding this level's bit, counting from the most significant.
        let target = n - 1 - level;
        // Controls are the higher qubits, ascending, so bit j of the prefix
        // pattern corresponds to controls[j].
        let controls: Vec<usize> = (target + 1..n).collect();
        let block = 1usize << (n - level); // bins per prefix pattern
        for pattern in 0..(1usize << level) {
            let start = pattern * block;
            let parent: f64 = probs[start..start + block].iter().sum();
            if parent <= 0.0 {
                continue;
            }
            let upper: f64 = probs[start + block / 2..start + block].iter().sum();
            let ratio = (upper / parent).clamp(0.0, 1.0);
            let angle = 2.0 * ratio.sqrt().asin();
            if angle == 0.0 {
                continue;
            }
            // Bit j of the prefix pattern is the prepared value of
            // controls[j] (both are ordered from qubit n-level upward).
            push_pattern_controlled_ry(&mut circuit.gates, &controls, pattern, target, angle);
        }
    }
    circuit.validate()?;
    Ok(circuit)
}

/// Build the full oracle for threshold `M`: state preparation followed by
/// payoff rotations on the ancilla.
pub fn build_oracle(binned: &BinnedDistribution, threshold_m: f64) -> Result<OracleSpec, OracleError> {
    let n = binned.n_qubits as usize;
    let payoffs: Vec<f64> = binned.midpoints.iter().map(|&x| (x - threshold_m).max(0.0)).collect();
    let f_max = payoffs.iter().cloned().fold(0.0, f64::max);
    let normalized_payoff: Vec<f64> =
        if f_max > 0.0 { payoffs.iter().map(|&f| f / f_max).collect() } else { vec![0.0; payoffs.len()] };

    let prep = build_state_prep(binned)?;
    let mut circuit = Circuit::new(n + 1, format!("oracle_n{n}"));
    circuit.extend_from(&prep)?;

    let controls: Vec<usize> = (0..n).collect();
    for (i, &f) in normalized_payoff.iter().enumerate() {
        if f <= 0.0 {
            continue;
        }
        let angle = 2.0 * f.sqrt().min(1.0).asin();
        push_pattern_controlled_ry(&mut circuit.gates, &controls, i, n, angle);
    }
    circuit.validate()?;

    let true_readout_prob: f64 =
        binned.probs.iter().zip(&normalized_payoff).map(|(&p, &f)| p * f).sum();

    Ok(OracleSpec {
        binned: binned.clone(),
        threshold_m,
        f_max,
        normalized_payoff,
        circuit_a: circuit,
        true_readout_prob,
    })
}

/// Undo the payoff normalization: dollars = readout probability * f_max.
pub fn recover_excess(readout_prob: f64, f_max: f64) -> f64 {
    readout_prob * f_max
}

/// Largest Grover iteration count keeping `(2k+1) theta < pi/2`, i.e.
/// `floor((pi/(2 theta) - 1)/2)` with `theta = asin(sqrt(p))`.
///
/// Returns `None` for p = 0: amplification of a zero amplitude is
/// undefined and callers report the exact zero estimate instead.
pub fn k_max(readout_prob: f64) -> Result<Option<u32>, OracleError> {
    if !(0.0..=1.0).contains(&readout_prob) {
        return Err(OracleError::BadReadout(readout_prob));
    }
    if readout_prob == 0.0 {
        return Ok(None);
    }
    let theta = readout_prob.sqrt().asin();
    let k = ((std::f64::consts::PI / (2.0 * theta) - 1.0) / 2.0).floor();
    Ok(Some(k.max(0.0) as u32))
}

/// One Grover iteration `Q = A S0 A^dag S_chi` as a subcircuit, in circuit
/// order: phase flip on ancilla |1>, inverse oracle, phase flip on the
/// all-zero state, oracle.
pub fn build_grover(oracle: &OracleSpec) -> Circuit {
    let n = oracle.num_index_qubits();
    let ancilla = oracle.ancilla();
    let mut q = Circuit::new(n + 1, format!("grover_n{n}"));

    // S_chi: Z on the ancilla.
    q.gates.push(Gate::z(ancilla));
    // A^dag.
    q.gates.extend(oracle.circuit_a.dagger().gates);
    // S0: phase flip of |0...0> = X^(n+1) . H(last) . MCX . H(last) . X^(n+1).
    for t in 0..=n {
        q.gates.push(Gate::x(t));
    }
    q.gates.push(Gate::h(ancilla));
    q.gates.push(Gate::mcx((0..n).collect(), ancilla));
    q.gates.push(Gate::h(ancilla));
    for t in 0..=n {
        q.gates.push(Gate::x(t));
    }
    // A.
    q.gates.extend(oracle.circuit_a.gates.iter().cloned());
    q
}

/// The full estimation circuit: `A` followed by k Grover iterations.
pub fn build_qae_circuit(oracle: &OracleSpec, grover_k: u32) -> Circuit {
    let n = oracle.num_index_qubits();
    let mut c = Circuit::new(n + 1, format!("qae_n{n}_k{grover_k}"));
    c.gates.extend(oracle.circuit_a.gates.iter().cloned());
    let q = build_grover(oracle);
    for _ in 0..grover_k {
        c.gates.extend(q.gates.iter().cloned());
    }
    c
}

/// Invert the amplification law: `sin^2(asin(sqrt(p_meas))/(2k+1))`.
/// Total over p_meas in [0, 1]; validity for k > 0 is the caller's
/// contract via [`k_max`].
pub fn deamplify(p_meas: f64, grover_k: u32) -> f64 {
    let theta_hat = p_meas.clamp(0.0, 1.0).sqrt().asin() / (2.0 * grover_k as f64 + 1.0);
    theta_hat.sin().powi(2)
}

/// Shot/iteration configuration for one estimator run.
#[derive(Debug, Clone, Copy)]
pub struct QaeConfig {
    pub grover_k: u32,
    pub shots: u64,
    pub rng_seed: u64,
}

fn check_k(oracle: &OracleSpec, grover_k: u32) -> Result<(), OracleError> {
    if let Some(km) = k_max(oracle.true_readout_prob)? {
        if grover_k > km {
            return Err(OracleError::KTooLarge {
                requested: grover_k,
                k_max: km,
                p: oracle.true_readout_prob,
            });
        }
    }
    Ok(())
}

/// A simulated-once amplified state that can be resampled cheaply across
/// repetitions with fresh seeds.
pub struct QaeSampler {
    state: Statevector,
    ancilla: usize,
    f_max: f64,
    grover_k: u32,
}

impl QaeSampler {
    pub fn new(oracle: &OracleSpec, grover_k: u32) -> Result<Self, OracleError> {
        check_k(oracle, grover_k)?;
        let circuit = build_qae_circuit(oracle, grover_k);
        let state = simulate(&circuit)?;
        Ok(QaeSampler { state, ancilla: oracle.ancilla(), f_max: oracle.f_max, grover_k })
    }

    /// Exact (statevector) ancilla |1> probability after amplification.
    pub fn exact_amplified_prob(&self) -> f64 {
        self.state.prob_qubit_one(self.ancilla)
    }

    /// Measure the ancilla over `shots` and de-amplify into dollars.
    pub fn estimate(&self, shots: u64, rng_seed: u64) -> Result<EstimatorResult, OracleError> {
        let hist = sample_shots(&self.state, &[self.ancilla], shots, rng_seed)?;
        let p_meas = hist.frequency(1);
        let estimate = recover_excess(deamplify(p_meas, self.grover_k), self.f_max);
        Ok(EstimatorResult {
            estimate,
            queries: shots * (2 * self.grover_k as u64 + 1),
            estimator: EstimatorId::Qae,
            seed: rng_seed,
            rep_index: 0,
        })
    }
}

/// End-to-end noiseless estimate: simulate `A + k Q`, measure the ancilla,
/// de-amplify, recover dollars. Queries consumed = shots x (2k+1).
pub fn qae_estimate(oracle: &OracleSpec, config: &QaeConfig) -> Result<EstimatorResult, OracleError> {
    let sampler = QaeSampler::new(oracle, config.grover_k)?;
    sampler.estimate(config.shots, config.rng_seed)
}

/// Same as [`qae_estimate`] but executed under stochastic noise.
pub fn qae_estimate_noisy(
    oracle: &OracleSpec,
    config: &QaeConfig,
    noise: &NoisePreset,
) -> Result<EstimatorResult, OracleError> {
    check_k(oracle, config.grover_k)?;
    let circuit = build_qae_circuit(oracle, config.grover_k);
    let hist = noisy_execute(&circuit, noise, &[oracle.ancilla()], config.shots, config.rng_seed)?;
    let p_meas = hist.frequency(1);
    let estimate = recover_excess(deamplify(p_meas, config.grover_k), oracle.f_max);
    Ok(EstimatorResult {
        estimate,
        queries: config.shots * (2 * config.grover_k as u64 + 1),
        estimator: EstimatorId::Qae,
        seed: config.rng_seed,
        rep_index: 0,
    })
}
