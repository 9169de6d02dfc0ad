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

//! Experiment orchestration: configurations, runners for the convergence,
//! noise, tail-sweep, budget-match, qubit-sweep, empirical-PMF and binning
//! studies, error decompositions, bootstrap slope fits, and report output.

mod checks;
mod experiments;
mod report;
mod seeds;
mod stats;

pub use checks::{check_report, CheckFailure};
pub use experiments::run_experiment;
pub use report::write_report;
pub use seeds::derive_seed;
pub use stats::{fit_loglog_slope, mean_std, rmse, SlopeFit};

use crate::baselines::EstimatorId;
use crate::dist::{BinningScheme, DistError};
use crate::ingest::IngestError;
use crate::oracle::OracleError;
use crate::qsim::QsimError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("no estimates to aggregate")]
    EmptyEstimates,
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("io error on {path}: {source}")]
    Io { path: std::path::PathBuf, source: std::io::Error },
}

/// The experiments and studies the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Exp1,
    Exp2,
    Exp3,
    Exp4a,
    Exp4b,
    Exp5,
    Exp6,
    Exp7,
    Binning,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 9] = [
        ExperimentId::Exp1,
        ExperimentId::Exp2,
        ExperimentId::Exp3,
        ExperimentId::Exp4a,
        ExperimentId::Exp4b,
        ExperimentId::Exp5,
        ExperimentId::Exp6,
        ExperimentId::Exp7,
        ExperimentId::Binning,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentId::Exp1 => "exp1",
            ExperimentId::Exp2 => "exp2",
            ExperimentId::Exp3 => "exp3",
            ExperimentId::Exp4a => "exp4a",
            ExperimentId::Exp4b => "exp4b",
            ExperimentId::Exp5 => "exp5",
            ExperimentId::Exp6 => "exp6",
            ExperimentId::Exp7 => "exp7",
            ExperimentId::Binning => "binning",
        }
    }
}

impl std::fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl std::str::FromStr for ExperimentId {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentId::ALL
            .iter()
            .find(|e| e.as_str() == s)
            .copied()
            .ok_or_else(|| HarnessError::Config(format!("unknown experiment '{s}'")))
    }
}

/// Which dataset an experiment runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetKind {
    Synthetic,
    Noaa,
}

impl std::fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DatasetKind::Synthetic => write!(f, "synthetic"),
            DatasetKind::Noaa => write!(f, "noaa"),
        }
    }
}

impl std::str::FromStr for DatasetKind {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "synthetic" => Ok(DatasetKind::Synthetic),
            "noaa" => Ok(DatasetKind::Noaa),
            other => Err(HarnessError::Config(format!("unknown dataset '{other}'"))),
        }
    }
}

/// Full configuration of one experiment run. Each experiment carries its
/// standard protocol as defaults; any field can be overridden from a config
/// file, and CLI flags win over the file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub dataset: DatasetKind,
    pub n_qubits: Vec<u32>,
    pub scheme: BinningScheme,
    pub percentiles: Vec<f64>,
    pub k_values: Vec<u32>,
    pub budgets: Vec<u64>,
    pub shots: u64,
    pub repetitions: u32,
    pub noise_presets: Vec<String>,
    pub master_seed: u64,
    pub fast: bool,
    /// Bootstrap resamples for slope CIs.
    pub bootstrap_resamples: u32,
}

impl ExperimentConfig {
    /// Full-scale defaults for an experiment; `fast` cuts repetitions to 10
    /// and caps the qubit sweep at n = 6 for CI-friendly runtimes.
    pub fn defaults(experiment: ExperimentId, fast: bool, master_seed: u64) -> Self {
        use ExperimentId::*;
        let dataset = match experiment {
            Exp4a | Exp4b | Exp7 => DatasetKind::Noaa,
            _ => DatasetKind::Synthetic,
        };
        let mut cfg = ExperimentConfig {
            experiment,
            dataset,
            n_qubits: vec![3],
            scheme: BinningScheme::EqualWidth,
            percentiles: vec![95.0],
            k_values: vec![],
            budgets: vec![],
            shots: 8192,
            repetitions: 30,
            noise_presets: vec![],
            master_seed,
            fast,
            bootstrap_resamples: 2000,
        };
        match experiment {
            Exp1 | Exp4a => {
                cfg.k_values = (0..=6).collect();
                cfg.shots = 1000;
                cfg.repetitions = 30;
            }
            Exp2 => {
                cfg.k_values = vec![3];
                cfg.shots = 8192;
                cfg.repetitions = 20;
                cfg.noise_presets =
                    vec!["noiseless".into(), "low".into(), "medium".into(), "high".into()];
            }
            Exp3 | Exp4b => {
                cfg.percentiles = vec![90.0, 95.0, 97.0];
                cfg.shots = 8192;
                cfg.repetitions = 30;
            }
            Exp5 => {
                cfg.percentiles = vec![90.0, 95.0, 97.0];
                cfg.budgets = vec![512, 2048, 8192];
                cfg.repetitions = 50;
            }
            Exp6 => {
                cfg.n_qubits = (3..=8).collect();
                cfg.budgets = vec![4000];
                cfg.repetitions = 50;
            }
            Exp7 => {
                cfg.scheme = BinningScheme::Quantile;
                cfg.percentiles = vec![90.0, 95.0, 97.0];
                cfg.budgets = vec![500, 2000, 8000];
                cfg.repetitions = 50;
            }
            Binning => {
                cfg.n_qubits = vec![3, 4, 5];
                cfg.budgets = vec![4000];
                cfg.repetitions = 30;
            }
        }
        if fast {
            cfg.repetitions = cfg.repetitions.min(10);
            cfg.n_qubits.retain(|&n| n <= 6);
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.repetitions < 2 {
            return Err(HarnessError::Config("repetitions must be >= 2".into()));
        }
        if self.percentiles.iter().any(|&p| !(0.0 < p && p < 100.0)) {
            return Err(HarnessError::Config("percentiles must lie in (0, 100)".into()));
        }
        if self.n_qubits.iter().any(|&n| !(1..=12).contains(&n)) {
            return Err(HarnessError::Config("n_qubits must lie in 1..=12".into()));
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &ConfigOverrides) {
        macro_rules! take {
            ($field:ident) => {
                if let Some(v) = &o.$field {
                    self.$field = v.clone();
                }
            };
        }
        take!(dataset);
        take!(n_qubits);
        take!(scheme);
        take!(percentiles);
        take!(k_values);
        take!(budgets);
        take!(shots);
        take!(repetitions);
        take!(noise_presets);
        take!(master_seed);
        take!(bootstrap_resamples);
    }
}

/// Partial configuration parsed from a config file; unset fields keep the
/// experiment defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub dataset: Option<DatasetKind>,
    pub n_qubits: Option<Vec<u32>>,
    pub scheme: Option<BinningScheme>,
    pub percentiles: Option<Vec<f64>>,
    pub k_values: Option<Vec<u32>>,
    pub budgets: Option<Vec<u64>>,
    pub shots: Option<u64>,
    pub repetitions: Option<u32>,
    pub noise_presets: Option<Vec<String>>,
    pub master_seed: Option<u64>,
    pub bootstrap_resamples: Option<u32>,
}

/// Aggregated statistics of one estimator within a configuration row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimatorStats {
    pub estimator: EstimatorId,
    pub queries: u64,
    pub rmse_vs_bins: Option<f64>,
    pub rmse_vs_analytic: Option<f64>,
    pub mean_estimate: f64,
    pub std_estimate: f64,
    /// Mean estimate minus the estimator's own ground truth.
    pub bias: Option<f64>,
}

/// One configuration's results: truths, per-estimator stats, and the
/// oracle-model speedup where both sides exist.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct ReportRow {
    pub label: String,
    pub n_qubits: Option<u32>,
    pub scheme: Option<BinningScheme>,
    pub percentile: Option<f64>,
    pub threshold_m: Option<f64>,
    pub noise_preset: Option<String>,
    pub grover_k: Option<u32>,
    pub k_max: Option<u32>,
    pub shots: Option<u64>,
    pub budget: Option<u64>,
    pub analytic_truth: Option<f64>,
    pub bins_truth: Option<f64>,
    pub disc_error: Option<f64>,
    pub estimators: Vec<EstimatorStats>,
    /// RMSE(classical-on-bins) / RMSE(quantum), both vs exact-on-bins.
    pub speedup: Option<f64>,
    pub sp_two_qubit_gates: Option<usize>,
    pub oracle_depth: Option<usize>,
    pub pathological: bool,
}

impl ReportRow {
    pub fn stats(&self, id: EstimatorId) -> Option<&EstimatorStats> {
        self.estimators.iter().find(|s| s.estimator == id)
    }
}

/// The full output of one experiment run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentId,
    pub dataset: DatasetKind,
    pub master_seed: u64,
    pub fast: bool,
    pub notes: Vec<String>,
    pub rows: Vec<ReportRow>,
    pub slope_fits: Vec<SlopeFit>,
}

/// Wall-clock projection of the oracle-model advantage at scale.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResourceProjection {
    pub classical_runs: f64,
    pub classical_cost_s: f64,
    pub classical_wall_s: f64,
    pub quantum_queries: f64,
    pub oracle_depth: f64,
    pub gate_time_s: f64,
    pub quantum_wall_s: f64,
    pub speedup_ratio: f64,
    pub caveats: Vec<String>,
}

/// Project wall-clock time for a classical budget of `classical_n` simulator
/// runs at `classical_cost_s` seconds each against a quantum estimator that
/// needs `sqrt(N)` oracle calls of `oracle_depth * gate_time_s` seconds.
pub fn resource_projection(
    classical_n: f64,
    classical_cost_s: f64,
    oracle_depth: f64,
    gate_time_s: f64,
) -> ResourceProjection {
    assert!(
        classical_n > 0.0 && classical_cost_s > 0.0 && oracle_depth > 0.0 && gate_time_s > 0.0,
        "projection inputs must be positive"
    );
    let classical_wall_s = classical_n * classical_cost_s;
    let quantum_queries = classical_n.sqrt();
    let quantum_wall_s = quantum_queries * oracle_depth * gate_time_s;
    ResourceProjection {
        classical_runs: classical_n,
        classical_cost_s,
        classical_wall_s,
        quantum_queries,
        oracle_depth,
        gate_time_s,
        quantum_wall_s,
        speedup_ratio: classical_wall_s / quantum_wall_s,
        caveats: vec![
            "Best-case projection only: assumes fault-tolerant execution of the full-depth circuit at the stated gate time with negligible logical error.".into(),
            "Assumes the loss simulator can be compiled into a quantum oracle of the stated depth; that compilation problem is unsolved.".into(),
            "Assumes enough qubits for the bin resolution the application needs; discretization error is not included in the ratio.".into(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_id_round_trip() {
        for e in ExperimentId::ALL {
            let s = e.to_string();
            let back: ExperimentId = s.parse().unwrap();
            assert_eq!(e, back);
        }
        assert!("exp9".parse::<ExperimentId>().is_err());
    }

    #[test]
    fn defaults_follow_protocols() {
        let c = ExperimentConfig::defaults(ExperimentId::Exp1, false, 42);
        assert_eq!(c.k_values, vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(c.shots, 1000);
        assert_eq!(c.repetitions, 30);
        assert_eq!(c.dataset, DatasetKind::Synthetic);

        let c = ExperimentConfig::defaults(ExperimentId::Exp7, false, 42);
        assert_eq!(c.dataset, DatasetKind::Noaa);
        assert_eq!(c.scheme, BinningScheme::Quantile);
        assert_eq!(c.budgets, vec![500, 2000, 8000]);

        let fast = ExperimentConfig::defaults(ExperimentId::Exp6, true, 42);
        assert_eq!(fast.repetitions, 10);
        assert_eq!(*fast.n_qubits.last().unwrap(), 6);
    }

    #[test]
    fn overrides_apply_and_validate() {
        let mut c = ExperimentConfig::defaults(ExperimentId::Exp1, false, 42);
        let o: ConfigOverrides =
            serde_json::from_str(r#"{"shots": 500, "repetitions": 5}"#).unwrap();
        c.apply_overrides(&o);
        assert_eq!(c.shots, 500);
        assert_eq!(c.repetitions, 5);
        assert!(c.validate().is_ok());
        c.repetitions = 1;
        assert!(c.validate().is_err());
        assert!(serde_json::from_str::<ConfigOverrides>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn projection_reference_point() {
        let p = resource_projection(10_000.0, 60.0, 200_000.0, 1e-6);
        assert!((p.quantum_wall_s - 20.0).abs() < 1e-9);
        assert!((p.classical_wall_s - 600_000.0).abs() < 1e-9);
        assert!((p.speedup_ratio - 30_000.0).abs() / 30_000.0 < 1e-12);
    }

    #[test]
    fn projection_limits() {
        let p = resource_projection(1.0, 60.0, 200_000.0, 1e-6);
        assert!((p.speedup_ratio - 60.0 / 0.2).abs() < 1e-9);
        let p2 = resource_projection(100.0, 1.0, 1e9, 1e3);
        assert!(p2.speedup_ratio < 1e-9);
    }
}
