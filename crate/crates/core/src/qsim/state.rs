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

//! Statevector storage and gate application.

use super::{Circuit, Gate, QsimError};
use num_complex::Complex64;

/// Dense complex amplitudes of length `2^num_qubits`, little-endian.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    amps: Vec<Complex64>,
    num_qubits: usize,
}

impl Statevector {
    /// |0...0> on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        assert!(num_qubits > 0 && num_qubits <= 26, "unreasonable qubit count {num_qubits}");
        let mut amps = vec![Complex64::ZERO; 1 << num_qubits];
        amps[0] = Complex64::ONE;
        Statevector { amps, num_qubits }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, QsimError> {
        if !amps.len().is_power_of_two() || amps.len() < 2 {
            return Err(QsimError::BadStateLength(amps.len()));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        Ok(Statevector { amps, num_qubits })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Born probability of the full basis outcome.
    pub fn probability(&self, outcome: usize) -> f64 {
        self.amps[outcome].norm_sqr()
    }

    /// Probability that `qubit` measures |1>.
    pub fn prob_qubit_one(&self, qubit: usize) -> f64 {
        assert!(qubit < self.num_qubits);
        let bit = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// |<self|other>|, for global-phase-insensitive comparison.
    pub fn fidelity(&self, other: &Statevector) -> f64 {
        assert_eq!(self.num_qubits, other.num_qubits);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    /// Apply a gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), QsimError> {
        gate.validate(self.num_qubits)?;
        let m = gate.base_matrix();
        let tbit = 1usize << gate.target;
        let cmask: usize = gate.controls.iter().fold(0, |acc, &c| acc | (1 << c));
        for i in 0..self.amps.len() {
            if i & tbit != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | tbit;
            let a0 = self.amps[i];
            let a1 = self.amps[j];
            self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(())
    }

    /// Apply a single-qubit Pauli, bypassing the gate set. Used by the
    /// stochastic noise channel; 0 = I, 1 = X, 2 = Y, 3 = Z.
    pub(crate) fn apply_pauli(&mut self, qubit: usize, pauli: u8) {
        let bit = 1usize << qubit;
        match pauli {
            0 => {}
            1 => {
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        self.amps.swap(i, i | bit);
                    }
                }
            }
            2 => {
                let im = Complex64::new(0.0, 1.0);
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        let j = i | bit;
                        let a0 = self.amps[i];
                        let a1 = self.amps[j];
                        self.amps[i] = -im * a1;
                        self.amps[j] = im * a0;
                    }
                }
            }
            3 => {
                for i in 0..self.amps.len() {
                    if i & bit != 0 {
                        self.amps[i] = -self.amps[i];
                    }
                }
            }
            _ => unreachable!("pauli code {pauli}"),
        }
    }
}

/// Apply a gate to a state, returning the transformed state.
pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector, QsimError> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Run a circuit from |0...0>.
pub fn simulate(circuit: &Circuit) -> Result<Statevector, QsimError> {
    let mut state = Statevector::zero(circuit.num_qubits);
    for gate in &circuit.gates {
        state.apply(gate)?;
    }
    Ok(state)
}
