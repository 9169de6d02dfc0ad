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

//! Dense statevector simulation: the gate set used by the amplitude-encoding
//! oracles, shot sampling, stochastic depolarizing/readout noise, and
//! transpilation to the `{CX, RZ, SX, X}` hardware basis.
//!
//! Bitstrings are little-endian throughout: qubit 0 is the least significant
//! bit of a basis index.

mod noise;
mod sampling;
mod state;
mod transpile;

pub use noise::{noisy_execute, NoisePreset};
pub use sampling::{sample_shots, Histogram};
pub use state::{apply_gate, simulate, Statevector};
pub use transpile::{transpile_to_basis, BasisCircuit, CircuitMetrics};

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QsimError {
    #[error("gate {gate} touches qubit {qubit} but circuit has {num_qubits} qubits")]
    QubitOutOfRange { gate: String, qubit: usize, num_qubits: usize },
    #[error("gate {gate} lists qubit {qubit} more than once")]
    DuplicateQubit { gate: String, qubit: usize },
    #[error("gate {gate} has a non-finite angle")]
    NonFiniteAngle { gate: String },
    #[error("gate {gate} expects {expected} control(s), got {got}")]
    ControlArity { gate: String, expected: &'static str, got: usize },
    #[error("measurement qubit list is empty")]
    EmptyMeasurement,
    #[error("shots must be >= 1")]
    ZeroShots,
    #[error("noise probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("statevector length {0} is not a power of two")]
    BadStateLength(usize),
}

/// What a gate does, with any rotation angle in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Ry(f64),
    CRy(f64),
    MCRy(f64),
    X,
    H,
    Z,
    Cx,
    Mcx,
    Rz(f64),
    Sx,
}

impl GateKind {
    fn name(&self) -> &'static str {
        match self {
            GateKind::Ry(_) => "RY",
            GateKind::CRy(_) => "CRY",
            GateKind::MCRy(_) => "MCRY",
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Z => "Z",
            GateKind::Cx => "CX",
            GateKind::Mcx => "MCX",
            GateKind::Rz(_) => "RZ",
            GateKind::Sx => "SX",
        }
    }
}

/// A gate instance: kind, target qubit, and ordered control qubits
/// (empty where not applicable).
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<usize>,
}

impl Gate {
    pub fn ry(target: usize, angle: f64) -> Self {
        Gate { kind: GateKind::Ry(angle), target, controls: vec![] }
    }
    pub fn cry(control: usize, target: usize, angle: f64) -> Self {
        Gate { kind: GateKind::CRy(angle), target, controls: vec![control] }
    }
    pub fn mcry(controls: Vec<usize>, target: usize, angle: f64) -> Self {
        Gate { kind: GateKind::MCRy(angle), target, controls }
    }
    pub fn x(target: usize) -> Self {
        Gate { kind: GateKind::X, target, controls: vec![] }
    }
    pub fn h(target: usize) -> Self {
        Gate { kind: GateKind::H, target, controls: vec![] }
    }
    pub fn z(target: usize) -> Self {
        Gate { kind: GateKind::Z, target, controls: vec![] }
    }
    pub fn cx(control: usize, target: usize) -> Self {
        Gate { kind: GateKind::Cx, target, controls: vec![control] }
    }
    pub fn mcx(controls: Vec<usize>, target: usize) -> Self {
        Gate { kind: GateKind::Mcx, target, controls }
    }
    pub fn rz(target: usize, angle: f64) -> Self {
        Gate { kind: GateKind::Rz(angle), target, controls: vec![] }
    }
    pub fn sx(target: usize) -> Self {
        Gate { kind: GateKind::Sx, target, controls: vec![] }
    }

    /// All qubits the gate touches: controls then target.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().copied().chain(std::iter::once(self.target))
    }

    pub fn num_touched(&self) -> usize {
        self.controls.len() + 1
    }

    pub fn angle(&self) -> Option<f64> {
        match self.kind {
            GateKind::Ry(a) | GateKind::CRy(a) | GateKind::MCRy(a) | GateKind::Rz(a) => Some(a),
            _ => None,
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<(), QsimError> {
        let name = self.kind.name().to_string();
        // Fixed-arity kinds; the multi-controlled kinds take any count.
        let required: Option<(usize, &'static str)> = match self.kind {
            GateKind::Ry(_) | GateKind::X | GateKind::H | GateKind::Z | GateKind::Rz(_)
            | GateKind::Sx => Some((0, "0")),
            GateKind::CRy(_) | GateKind::Cx => Some((1, "1")),
            GateKind::MCRy(_) | GateKind::Mcx => None,
        };
        if let Some((count, expected)) = required {
            if self.controls.len() != count {
                return Err(QsimError::ControlArity {
                    gate: name,
                    expected,
                    got: self.controls.len(),
                });
            }
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(QsimError::NonFiniteAngle { gate: name });
            }
        }
        let mut seen = 0u64;
        for q in self.support() {
            if q >= num_qubits {
                return Err(QsimError::QubitOutOfRange { gate: name, qubit: q, num_qubits });
            }
            if seen & (1 << q) != 0 {
                return Err(QsimError::DuplicateQubit { gate: name, qubit: q });
            }
            seen |= 1 << q;
        }
        Ok(())
    }

    /// The 2x2 unitary applied to the target when all controls are set.
    pub(crate) fn base_matrix(&self) -> [[Complex64; 2]; 2] {
        let re = Complex64::new;
        match self.kind {
            GateKind::Ry(a) | GateKind::CRy(a) | GateKind::MCRy(a) => {
                let (s, c) = (0.5 * a).sin_cos();
                [[re(c, 0.0), re(-s, 0.0)], [re(s, 0.0), re(c, 0.0)]]
            }
            GateKind::X | GateKind::Cx | GateKind::Mcx => {
                [[re(0.0, 0.0), re(1.0, 0.0)], [re(1.0, 0.0), re(0.0, 0.0)]]
            }
            GateKind::H => {
                let h = FRAC_1_SQRT_2;
                [[re(h, 0.0), re(h, 0.0)], [re(h, 0.0), re(-h, 0.0)]]
            }
            GateKind::Z => [[re(1.0, 0.0), re(0.0, 0.0)], [re(0.0, 0.0), re(-1.0, 0.0)]],
            GateKind::Rz(a) => [
                [Complex64::from_polar(1.0, -0.5 * a), re(0.0, 0.0)],
                [re(0.0, 0.0), Complex64::from_polar(1.0, 0.5 * a)],
            ],
            GateKind::Sx => [
                [re(0.5, 0.5), re(0.5, -0.5)],
                [re(0.5, -0.5), re(0.5, 0.5)],
            ],
        }
    }

    /// Gates implementing the inverse, in circuit order.
    pub fn inverse_gates(&self) -> Vec<Gate> {
        match self.kind {
            GateKind::Ry(a) => vec![Gate { kind: GateKind::Ry(-a), ..self.clone() }],
            GateKind::CRy(a) => vec![Gate { kind: GateKind::CRy(-a), ..self.clone() }],
            GateKind::MCRy(a) => vec![Gate { kind: GateKind::MCRy(-a), ..self.clone() }],
            GateKind::Rz(a) => vec![Gate { kind: GateKind::Rz(-a), ..self.clone() }],
            // SX^4 = I, so the inverse is three more SX.
            GateKind::Sx => vec![self.clone(), self.clone(), self.clone()],
            GateKind::X | GateKind::H | GateKind::Z | GateKind::Cx | GateKind::Mcx => {
                vec![self.clone()]
            }
        }
    }
}

/// An ordered gate list over a fixed qubit count.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
    pub label: String,
}

impl Circuit {
    pub fn new(num_qubits: usize, label: impl Into<String>) -> Self {
        assert!(num_qubits > 0, "circuit needs at least one qubit");
        Circuit { num_qubits, gates: Vec::new(), label: label.into() }
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), QsimError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend_from(&mut self, other: &Circuit) -> Result<(), QsimError> {
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), QsimError> {
        for g in &self.gates {
            g.validate(self.num_qubits)?;
        }
        Ok(())
    }

    /// The adjoint circuit: gates reversed and individually inverted.
    pub fn dagger(&self) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in self.gates.iter().rev() {
            gates.extend(g.inverse_gates());
        }
        Circuit { num_qubits: self.num_qubits, gates, label: format!("{}^dag", self.label) }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}
