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

//! Deterministic transpilation to the `{CX, RZ, SX, X}` hardware basis.
//!
//! Decomposition rules:
//! - single-qubit gates: ZYZ Euler angles emitted as RZ-SX-RZ-SX-RZ
//!   (diagonal matrices collapse to a single RZ);
//! - controlled/multi-controlled RY: gray-code multiplexed rotation,
//!   `2^m` rotations interleaved with `2^m` CX for m controls;
//! - multi-controlled X: H-conjugated multi-controlled phase, itself built
//!   from recursively nested gray-code multiplexed RZ layers.
//!
//! Output is equivalent to the input up to global phase; gate counts are
//! deterministic functions of the input circuit.

use super::{Circuit, Gate, GateKind, QsimError};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Gate-count and depth metrics of a transpiled circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CircuitMetrics {
    pub two_qubit_count: usize,
    pub depth: usize,
    pub total_gates: usize,
}

/// A circuit restricted to the `{CX, RZ, SX, X}` basis, with metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisCircuit {
    pub circuit: Circuit,
    pub metrics: CircuitMetrics,
}

const ANGLE_EPS: f64 = 1e-12;
const MAT_EPS: f64 = 1e-12;

fn normalize_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

fn push_rz(out: &mut Vec<Gate>, target: usize, angle: f64) {
    let a = normalize_angle(angle);
    if a.abs() > ANGLE_EPS {
        out.push(Gate::rz(target, a));
    }
}

/// Emit `U = RZ(alpha) RY(beta) RZ(gamma)` (matrix order) in the SX basis,
/// using `U3 ~ RZ(phi+pi) SX RZ(theta+pi) SX RZ(lambda)` up to global phase.
fn emit_zyz(alpha: f64, beta: f64, gamma: f64, target: usize, out: &mut Vec<Gate>) {
    push_rz(out, target, gamma);
    out.push(Gate::sx(target));
    push_rz(out, target, beta + PI);
    out.push(Gate::sx(target));
    push_rz(out, target, alpha + PI);
}

/// Decompose an arbitrary 2x2 unitary acting on `target`.
fn emit_single_qubit(m: [[Complex64; 2]; 2], target: usize, out: &mut Vec<Gate>) {
    let off = m[0][1].norm().max(m[1][0].norm());
    let diag = m[0][0].norm().max(m[1][1].norm());
    if off < MAT_EPS {
        // Diagonal: a single RZ up to global phase.
        push_rz(out, target, m[1][1].arg() - m[0][0].arg());
        return;
    }
    if diag < MAT_EPS {
        // Anti-diagonal: U = X * diag(m10, m01); emit the RZ first.
        push_rz(out, target, m[0][1].arg() - m[1][0].arg());
        out.push(Gate::x(target));
        return;
    }
    // Strip the global phase so the matrix is special unitary, then read
    // the ZYZ angles off the standard SU(2) parametrization.
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let phase = Complex64::from_polar(1.0, -det.arg() / 2.0);
    let su = [[m[0][0] * phase, m[0][1] * phase], [m[1][0] * phase, m[1][1] * phase]];
    let beta = 2.0 * su[1][0].norm().atan2(su[0][0].norm());
    let sum = 2.0 * su[1][1].arg();
    let diff = 2.0 * su[1][0].arg();
    emit_zyz(0.5 * (sum + diff), beta, 0.5 * (sum - diff), target, out);
}

fn emit_ry(target: usize, angle: f64, out: &mut Vec<Gate>) {
    if normalize_angle(angle).abs() <= ANGLE_EPS {
        return;
    }
    emit_zyz(0.0, angle, 0.0, target, out);
}

#[derive(Clone, Copy, PartialEq)]
enum Axis {
    Ry,
    Rz,
}

/// Gray-code multiplexed rotation equal to `R(theta)` on `target` when all
/// controls read 1 and identity otherwise: `2^m` rotations interleaved with
/// `2^m` CX gates.
fn emit_multiplexed(axis: Axis, controls: &[usize], target: usize, theta: f64, out: &mut Vec<Gate>) {
    debug_assert!(!controls.is_empty());
    if normalize_angle(theta).abs() <= ANGLE_EPS && axis == Axis::Ry {
        return;
    }
    let m = controls.len();
    let size = 1usize << m;
    let base = theta / size as f64;
    for i in 0..size {
        let gray = i ^ (i >> 1);
        let angle = if gray.count_ones() % 2 == 1 { -base } else { base };
        match axis {
            Axis::Ry => emit_ry(target, angle, out),
            Axis::Rz => push_rz(out, target, angle),
        }
        let ctrl_bit = if i == size - 1 { m - 1 } else { (i + 1).trailing_zeros() as usize };
        out.push(Gate::cx(controls[ctrl_bit], target));
    }
}

/// Multi-controlled phase: `e^{i lambda}` on the all-ones control pattern
/// with the target in |1>. Each recursion level peels one control into a
/// multiplexed RZ plus a half-angle phase on the remaining controls.
fn emit_mcp(controls: &[usize], target: usize, lambda: f64, out: &mut Vec<Gate>) {
    if controls.is_empty() {
        push_rz(out, target, lambda);
        return;
    }
    emit_multiplexed(Axis::Rz, controls, target, lambda, out);
    let (last, rest) = controls.split_last().unwrap();
    emit_mcp(rest, *last, lambda / 2.0, out);
}

fn compute_metrics(gates: &[Gate], num_qubits: usize) -> CircuitMetrics {
    let mut levels = vec![0usize; num_qubits];
    let mut depth = 0;
    let mut two_qubit_count = 0;
    for g in gates {
        if g.num_touched() >= 2 {
            two_qubit_count += 1;
        }
        let level = 1 + g.support().map(|q| levels[q]).max().unwrap();
        for q in g.support() {
            levels[q] = level;
        }
        depth = depth.max(level);
    }
    CircuitMetrics { two_qubit_count, depth, total_gates: gates.len() }
}

/// Rewrite a circuit over the `{CX, RZ, SX, X}` basis. The result is
/// unitarily equivalent to the input up to global phase.
pub fn transpile_to_basis(circuit: &Circuit) -> Result<BasisCircuit, QsimError> {
    circuit.validate()?;
    let mut gates: Vec<Gate> = Vec::new();
    for g in &circuit.gates {
        match g.kind {
            GateKind::X | GateKind::Cx | GateKind::Sx => gates.push(g.clone()),
            GateKind::Rz(a) => push_rz(&mut gates, g.target, a),
            GateKind::H | GateKind::Z => emit_single_qubit(g.base_matrix(), g.target, &mut gates),
            GateKind::Ry(a) => emit_ry(g.target, a, &mut gates),
            GateKind::CRy(a) | GateKind::MCRy(a) => {
                if g.controls.is_empty() {
                    emit_ry(g.target, a, &mut gates);
                } else {
                    emit_multiplexed(Axis::Ry, &g.controls, g.target, a, &mut gates);
                }
            }
            GateKind::Mcx => match g.controls.len() {
                0 => gates.push(Gate::x(g.target)),
                1 => gates.push(Gate::cx(g.controls[0], g.target)),
                _ => {
                    let h = Gate::h(g.target).base_matrix();
                    emit_single_qubit(h, g.target, &mut gates);
                    emit_mcp(&g.controls, g.target, PI, &mut gates);
                    emit_single_qubit(h, g.target, &mut gates);
                }
            },
        }
    }
    let metrics = compute_metrics(&gates, circuit.num_qubits);
    let circuit = Circuit {
        num_qubits: circuit.num_qubits,
        gates,
        label: format!("{}@basis", circuit.label),
    };
    Ok(BasisCircuit { circuit, metrics })
}

impl BasisCircuit {
    /// True when every gate is in the target basis.
    pub fn is_basis_only(&self) -> bool {
        self.circuit.gates.iter().all(|g| {
            matches!(g.kind, GateKind::Cx | GateKind::Rz(_) | GateKind::Sx | GateKind::X)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Statevector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(n: usize, rng: &mut ChaCha8Rng) -> Statevector {
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Statevector::from_amplitudes(amps).unwrap()
    }

    fn apply_all(state: &Statevector, circuit: &Circuit) -> Statevector {
        let mut s = state.clone();
        for g in &circuit.gates {
            s.apply(g).unwrap();
        }
        s
    }

    /// Equivalence up to global phase on random input states.
    fn assert_equivalent(original: &Circuit, transpiled: &Circuit, states: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..states {
            let s = random_state(original.num_qubits, &mut rng);
            let a = apply_all(&s, original);
            let b = apply_all(&s, transpiled);
            let fid = a.fidelity(&b);
            assert!(
                (fid - 1.0).abs() < 1e-9,
                "fidelity {fid} for circuit '{}'",
                original.label
            );
        }
    }

    #[test]
    fn single_cx_passes_through() {
        let mut c = Circuit::new(2, "cx");
        c.push(Gate::cx(0, 1)).unwrap();
        let t = transpile_to_basis(&c).unwrap();
        assert_eq!(t.metrics.two_qubit_count, 1);
        assert_eq!(t.metrics.depth, 1);
        assert_eq!(t.metrics.total_gates, 1);
        assert!(t.is_basis_only());
    }

    #[test]
    fn cry_uses_two_cx() {
        let mut c = Circuit::new(2, "cry");
        c.push(Gate::cry(0, 1, 1.1)).unwrap();
        let t = transpile_to_basis(&c).unwrap();
        assert_eq!(t.metrics.two_qubit_count, 2);
        assert!(t.is_basis_only());
        assert_equivalent(&c, &t.circuit, 20, 5);
    }

    #[test]
    fn mcry_uses_power_of_two_cx() {
        for m in 1..=4usize {
            let controls: Vec<usize> = (0..m).collect();
            let mut c = Circuit::new(m + 1, format!("mcry{m}"));
            c.push(Gate::mcry(controls, m, 0.77)).unwrap();
            let t = transpile_to_basis(&c).unwrap();
            assert_eq!(t.metrics.two_qubit_count, 1 << m, "m={m}");
            assert_equivalent(&c, &t.circuit, 10, m as u64);
        }
    }

    #[test]
    fn single_qubit_gates_equivalent() {
        for (label, gate) in [
            ("h", Gate::h(0)),
            ("z", Gate::z(0)),
            ("ry", Gate::ry(0, 0.456)),
            ("ry-neg", Gate::ry(0, -2.2)),
            ("rz", Gate::rz(0, 1.234)),
            ("x", Gate::x(0)),
            ("sx", Gate::sx(0)),
        ] {
            let mut c = Circuit::new(1, label);
            c.push(gate).unwrap();
            let t = transpile_to_basis(&c).unwrap();
            assert!(t.is_basis_only(), "{label}");
            assert_equivalent(&c, &t.circuit, 20, 17);
        }
    }

    #[test]
    fn z_collapses_to_single_rz() {
        let mut c = Circuit::new(1, "z");
        c.push(Gate::z(0)).unwrap();
        let t = transpile_to_basis(&c).unwrap();
        assert_eq!(t.metrics.total_gates, 1);
        assert!(matches!(t.circuit.gates[0].kind, GateKind::Rz(_)));
    }

    #[test]
    fn mcx_equivalent_and_counted() {
        for m in 2..=4usize {
            let controls: Vec<usize> = (0..m).collect();
            let mut c = Circuit::new(m + 1, format!("mcx{m}"));
            c.push(Gate::mcx(controls, m)).unwrap();
            let t = transpile_to_basis(&c).unwrap();
            assert!(t.is_basis_only());
            assert!(t.metrics.two_qubit_count > 0);
            assert_equivalent(&c, &t.circuit, 10, 100 + m as u64);
        }
    }

    #[test]
    fn mixed_circuit_equivalent() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..8 {
            let n = rng.random_range(2..5usize);
            let mut c = Circuit::new(n, format!("random{trial}"));
            for _ in 0..12 {
                let target = rng.random_range(0..n);
                let mut others: Vec<usize> = (0..n).filter(|&q| q != target).collect();
                let kind = rng.random_range(0..8u32);
                let gate = match kind {
                    0 => Gate::ry(target, rng.random_range(-3.0..3.0)),
                    1 => Gate::h(target),
                    2 => Gate::z(target),
                    3 => Gate::rz(target, rng.random_range(-3.0..3.0)),
                    4 => Gate::sx(target),
                    5 => Gate::cry(others[0], target, rng.random_range(-3.0..3.0)),
                    6 => {
                        others.truncate(rng.random_range(1..=others.len()));
                        Gate::mcry(others, target, rng.random_range(-3.0..3.0))
                    }
                    _ => {
                        others.truncate(rng.random_range(1..=others.len()));
                        Gate::mcx(others, target)
                    }
                };
                c.push(gate).unwrap();
            }
            let t = transpile_to_basis(&c).unwrap();
            assert!(t.is_basis_only());
            assert_equivalent(&c, &t.circuit, 20, 3000 + trial);
        }
    }

    #[test]
    fn depth_respects_parallel_gates() {
        let mut c = Circuit::new(4, "parallel");
        c.push(Gate::x(0)).unwrap();
        c.push(Gate::x(1)).unwrap();
        c.push(Gate::x(2)).unwrap();
        c.push(Gate::cx(0, 1)).unwrap();
        c.push(Gate::cx(2, 3)).unwrap();
        let t = transpile_to_basis(&c).unwrap();
        // X layer is depth 1 (disjoint qubits); the CX layer adds one more.
        assert_eq!(t.metrics.depth, 2);
    }

    #[test]
    fn zero_angle_rotations_vanish() {
        let mut c = Circuit::new(2, "zero");
        c.push(Gate::ry(0, 0.0)).unwrap();
        c.push(Gate::cry(0, 1, 0.0)).unwrap();
        c.push(Gate::rz(1, 0.0)).unwrap();
        let t = transpile_to_basis(&c).unwrap();
        assert_eq!(t.metrics.total_gates, 0);
    }
}
