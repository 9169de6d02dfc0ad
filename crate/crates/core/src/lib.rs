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

//! Grover-boosted quantum amplitude estimation for catastrophe tail-risk
//! pricing, on a dense statevector simulator, with classical baselines and
//! an experiment harness.
//!
//! The pipeline: loss data (synthetic Pareto or NOAA storm records) is
//! fitted to a lognormal, discretized into `2^n` bins, amplitude-encoded
//! into an oracle circuit whose ancilla readout probability equals the
//! normalized expected excess loss over a threshold, then estimated with
//! Grover amplification and compared against five classical estimators at
//! matched query budgets.

// `!(a > b)` guards intentionally reject NaN where `a <= b` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod dist;
pub mod harness;
pub mod ingest;
pub mod oracle;
pub mod qsim;

pub use baselines::{EstimatorId, EstimatorResult};
pub use dist::{BinnedDistribution, BinningScheme, LognormalParams, LossSource};
pub use oracle::OracleSpec;
pub use qsim::{Circuit, Gate, NoisePreset, Statevector};
