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

//! Shot sampling from a statevector.

use super::{QsimError, Statevector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Measurement outcome histogram over a list of measured qubits.
///
/// Outcome keys are little-endian: bit `j` of the key is the measured value
/// of `measured_qubits[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: BTreeMap<u64, u64>,
    pub num_bits: usize,
    pub shots: u64,
}

impl Histogram {
    pub fn count(&self, outcome: u64) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    /// Empirical frequency of the outcome.
    pub fn frequency(&self, outcome: u64) -> f64 {
        self.count(outcome) as f64 / self.shots as f64
    }

    /// Frequency of bit `j` (of the measured list) reading 1.
    pub fn bit_frequency(&self, j: usize) -> f64 {
        assert!(j < self.num_bits);
        let ones: u64 =
            self.counts.iter().filter(|(o, _)| *o & (1 << j) != 0).map(|(_, c)| c).sum();
        ones as f64 / self.shots as f64
    }

    /// Render an outcome as a bitstring, most significant bit first.
    pub fn bitstring(&self, outcome: u64) -> String {
        (0..self.num_bits).rev().map(|j| if outcome & (1 << j) != 0 { '1' } else { '0' }).collect()
    }
}

pub(crate) fn check_measured(
    measured_qubits: &[usize],
    num_qubits: usize,
) -> Result<(), QsimError> {
    if measured_qubits.is_empty() {
        return Err(QsimError::EmptyMeasurement);
    }
    let mut seen = 0u64;
    for &q in measured_qubits {
        if q >= num_qubits {
            return Err(QsimError::QubitOutOfRange {
                gate: "measure".into(),
                qubit: q,
                num_qubits,
            });
        }
        if seen & (1 << q) != 0 {
            return Err(QsimError::DuplicateQubit { gate: "measure".into(), qubit: q });
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// Marginal Born probabilities over the measured qubits.
pub(crate) fn marginal_probs(state: &Statevector, measured_qubits: &[usize]) -> Vec<f64> {
    let m = measured_qubits.len();
    let mut probs = vec![0.0; 1 << m];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let mut outcome = 0usize;
        for (j, &q) in measured_qubits.iter().enumerate() {
            if i & (1 << q) != 0 {
                outcome |= 1 << j;
            }
        }
        probs[outcome] += p;
    }
    probs
}

pub(crate) fn draw_categorical(cumulative: &[f64], u: f64) -> usize {
    // partition_point returns the first index with cum > u.
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}

/// Sample `shots` measurement outcomes of `measured_qubits`. Deterministic
/// for a given seed.
pub fn sample_shots(
    state: &Statevector,
    measured_qubits: &[usize],
    shots: u64,
    rng_seed: u64,
) -> Result<Histogram, QsimError> {
    check_measured(measured_qubits, state.num_qubits())?;
    if shots == 0 {
        return Err(QsimError::ZeroShots);
    }
    let probs = marginal_probs(state, measured_qubits);
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cumulative.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.random();
        let outcome = draw_categorical(&cumulative, u);
        *counts.entry(outcome as u64).or_insert(0) += 1;
    }
    Ok(Histogram { counts, num_bits: measured_qubits.len(), shots })
}
