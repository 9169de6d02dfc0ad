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

//! Stochastic depolarizing + readout noise, unraveled as per-shot Pauli
//! trajectories. After every gate touching k qubits, a uniformly random
//! element of the 4^k Pauli group (identity included) is applied to those
//! qubits with probability `p_1q` (k = 1) or `p_2q` (k >= 2); each measured
//! bit then flips independently with probability `p_readout`.

use super::sampling::{check_measured, draw_categorical, marginal_probs};
use super::{simulate, Circuit, Histogram, QsimError, Statevector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Depolarizing/readout error rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisePreset {
    pub name: String,
    pub p_1q: f64,
    pub p_2q: f64,
    pub p_readout: f64,
}

impl NoisePreset {
    pub fn noiseless() -> Self {
        NoisePreset { name: "noiseless".into(), p_1q: 0.0, p_2q: 0.0, p_readout: 0.0 }
    }

    pub fn low() -> Self {
        NoisePreset { name: "low".into(), p_1q: 0.001, p_2q: 0.01, p_readout: 0.005 }
    }

    pub fn medium() -> Self {
        NoisePreset { name: "medium".into(), p_1q: 0.005, p_2q: 0.05, p_readout: 0.02 }
    }

    pub fn high() -> Self {
        NoisePreset { name: "high".into(), p_1q: 0.01, p_2q: 0.10, p_readout: 0.05 }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "noiseless" => Some(Self::noiseless()),
            "low" => Some(Self::low()),
            "medium" => Some(Self::medium()),
            "high" => Some(Self::high()),
            _ => None,
        }
    }

    pub fn all_presets() -> [Self; 4] {
        [Self::noiseless(), Self::low(), Self::medium(), Self::high()]
    }

    pub fn is_noiseless(&self) -> bool {
        self.p_1q == 0.0 && self.p_2q == 0.0 && self.p_readout == 0.0
    }

    pub fn validate(&self) -> Result<(), QsimError> {
        for p in [self.p_1q, self.p_2q, self.p_readout] {
            if !(0.0..=1.0).contains(&p) {
                return Err(QsimError::InvalidProbability(p));
            }
        }
        // The name "noiseless" is load-bearing in reports; it must not
        // carry hidden error rates.
        if self.name == "noiseless" && !self.is_noiseless() {
            return Err(QsimError::InvalidProbability(self.p_1q.max(self.p_2q).max(self.p_readout)));
        }
        Ok(())
    }
}

/// A Pauli fault injected after a particular gate: one code in 0..4 per
/// touched qubit (0 = I, 1 = X, 2 = Y, 3 = Z).
struct Fault {
    gate_index: usize,
    paulis: Vec<(usize, u8)>,
}

/// Execute a circuit under stochastic noise, measuring `measured_qubits`
/// over `shots` trajectories. Deterministic for a given seed; the noiseless
/// preset reduces exactly to [`super::sample_shots`].
pub fn noisy_execute(
    circuit: &Circuit,
    noise: &NoisePreset,
    measured_qubits: &[usize],
    shots: u64,
    rng_seed: u64,
) -> Result<Histogram, QsimError> {
    circuit.validate()?;
    noise.validate()?;
    check_measured(measured_qubits, circuit.num_qubits)?;
    if shots == 0 {
        return Err(QsimError::ZeroShots);
    }
    if noise.is_noiseless() {
        let state = simulate(circuit)?;
        return super::sample_shots(&state, measured_qubits, shots, rng_seed);
    }

    // Shots without any fault reuse the noiseless final state.
    let clean_state = simulate(circuit)?;
    let clean_probs = marginal_probs(&clean_state, measured_qubits);
    let clean_cumulative = cumulative(&clean_probs);

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut faults: Vec<Fault> = Vec::new();

    for _ in 0..shots {
        faults.clear();
        for (gi, gate) in circuit.gates.iter().enumerate() {
            let p = if gate.num_touched() == 1 { noise.p_1q } else { noise.p_2q };
            if p > 0.0 && rng.random::<f64>() < p {
                let paulis: Vec<(usize, u8)> =
                    gate.support().map(|q| (q, rng.random_range(0..4u8))).collect();
                faults.push(Fault { gate_index: gi, paulis });
            }
        }

        let outcome = if faults.is_empty() {
            draw_categorical(&clean_cumulative, rng.random()) as u64
        } else {
            let state = run_trajectory(circuit, &faults)?;
            let probs = marginal_probs(&state, measured_qubits);
            draw_categorical(&cumulative(&probs), rng.random()) as u64
        };

        let mut noisy_outcome = outcome;
        if noise.p_readout > 0.0 {
            for j in 0..measured_qubits.len() {
                if rng.random::<f64>() < noise.p_readout {
                    noisy_outcome ^= 1 << j;
                }
            }
        }
        *counts.entry(noisy_outcome).or_insert(0) += 1;
    }

    Ok(Histogram { counts, num_bits: measured_qubits.len(), shots })
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn run_trajectory(circuit: &Circuit, faults: &[Fault]) -> Result<Statevector, QsimError> {
    let mut state = Statevector::zero(circuit.num_qubits);
    let mut next_fault = 0;
    for (gi, gate) in circuit.gates.iter().enumerate() {
        state.apply(gate)?;
        while next_fault < faults.len() && faults[next_fault].gate_index == gi {
            for &(q, pauli) in &faults[next_fault].paulis {
                state.apply_pauli(q, pauli);
            }
            next_fault += 1;
        }
    }
    Ok(state)
}
