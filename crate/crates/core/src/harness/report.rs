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

//! Report output: a fixed-schema CSV (one line per estimator per
//! configuration), a JSON summary, and two-column plot data files.
//!
//! All output is deterministic for a given report, so identical
//! configurations produce byte-identical files.

use super::{EstimatorStats, ExperimentId, ExperimentReport, HarnessError, ReportRow};
use crate::baselines::EstimatorId;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Column order of `report.csv`, identical for every experiment.
pub const CSV_COLUMNS: &[&str] = &[
    "experiment",
    "dataset",
    "row_label",
    "n_qubits",
    "scheme",
    "percentile",
    "threshold_m",
    "noise_preset",
    "grover_k",
    "k_max",
    "shots",
    "budget",
    "analytic_truth",
    "bins_truth",
    "disc_error",
    "estimator",
    "estimator_queries",
    "rmse_vs_bins",
    "rmse_vs_analytic",
    "mean_estimate",
    "std_estimate",
    "bias",
    "speedup",
    "sp_two_qubit_gates",
    "oracle_depth",
    "pathological",
];

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn csv_line(report: &ExperimentReport, row: &ReportRow, e: &EstimatorStats) -> String {
    let fields: Vec<String> = vec![
        report.experiment.to_string(),
        report.dataset.to_string(),
        row.label.clone(),
        opt(&row.n_qubits),
        opt(&row.scheme),
        opt(&row.percentile),
        opt(&row.threshold_m),
        opt(&row.noise_preset),
        opt(&row.grover_k),
        opt(&row.k_max),
        opt(&row.shots),
        opt(&row.budget),
        opt(&row.analytic_truth),
        opt(&row.bins_truth),
        opt(&row.disc_error),
        e.estimator.to_string(),
        e.queries.to_string(),
        opt(&e.rmse_vs_bins),
        opt(&e.rmse_vs_analytic),
        e.mean_estimate.to_string(),
        e.std_estimate.to_string(),
        opt(&e.bias),
        opt(&row.speedup),
        opt(&row.sp_two_qubit_gates),
        opt(&row.oracle_depth),
        row.pathological.to_string(),
    ];
    fields.join(",")
}

/// Render the CSV body.
pub fn report_csv(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    for row in &report.rows {
        for e in &row.estimators {
            out.push_str(&csv_line(report, row, e));
            out.push('\n');
        }
    }
    out
}

/// Per-series (x, y) plot data derived from the report.
pub fn plot_series(report: &ExperimentReport) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    let mut push = |name: &str, x: f64, y: Option<f64>| {
        let Some(y) = y else { return };
        if let Some(entry) = series.iter_mut().find(|(n, _)| n == name) {
            entry.1.push((x, y));
        } else {
            series.push((name.to_string(), vec![(x, y)]));
        }
    };

    for row in &report.rows {
        match report.experiment {
            ExperimentId::Exp1 | ExperimentId::Exp4a => {
                let x = row.budget.unwrap_or(0) as f64;
                push("quantum_rmse", x, row.stats(EstimatorId::Qae).and_then(|e| e.rmse_vs_bins));
                push(
                    "classical_bins_rmse",
                    x,
                    row.stats(EstimatorId::BinnedMc).and_then(|e| e.rmse_vs_bins),
                );
                push(
                    "classical_continuous_rmse",
                    x,
                    row.stats(EstimatorId::Naive).and_then(|e| e.rmse_vs_analytic),
                );
            }
            ExperimentId::Exp2 => {
                // x is the two-qubit depolarizing probability of the preset.
                let x = row
                    .noise_preset
                    .as_deref()
                    .and_then(crate::qsim::NoisePreset::by_name)
                    .map(|p| p.p_2q)
                    .unwrap_or(0.0);
                push("noise_rmse", x, row.stats(EstimatorId::Qae).and_then(|e| e.rmse_vs_bins));
                push(
                    "noise_bias",
                    x,
                    row.stats(EstimatorId::Qae).and_then(|e| e.bias),
                );
            }
            ExperimentId::Exp3 | ExperimentId::Exp4b => {
                let x = row.percentile.unwrap_or(0.0);
                if !row.label.ends_with("_k0") {
                    push("speedup_by_percentile", x, row.speedup);
                    push(
                        "quantum_rmse",
                        x,
                        row.stats(EstimatorId::Qae).and_then(|e| e.rmse_vs_bins),
                    );
                    push(
                        "classical_bins_rmse",
                        x,
                        row.stats(EstimatorId::BinnedMc).and_then(|e| e.rmse_vs_bins),
                    );
                    push("disc_error", x, row.disc_error);
                }
            }
            ExperimentId::Exp5 => {
                let x = row.budget.unwrap_or(0) as f64;
                let pct = row.percentile.unwrap_or(0.0);
                for e in &row.estimators {
                    if e.estimator == EstimatorId::ExactBins {
                        continue;
                    }
                    push(&format!("{}_p{pct}", e.estimator), x, e.rmse_vs_analytic);
                }
            }
            ExperimentId::Exp6 => {
                let x = row.n_qubits.unwrap_or(0) as f64;
                push("disc_error", x, row.disc_error);
                push("quantum_rmse", x, row.stats(EstimatorId::Qae).and_then(|e| e.rmse_vs_bins));
                push(
                    "classical_bins_rmse",
                    x,
                    row.stats(EstimatorId::BinnedMc).and_then(|e| e.rmse_vs_bins),
                );
                push("sp_two_qubit_gates", x, row.sp_two_qubit_gates.map(|v| v as f64));
                push("oracle_depth", x, row.oracle_depth.map(|v| v as f64));
            }
            ExperimentId::Exp7 => {
                let x = row.budget.unwrap_or(0) as f64;
                let pct = row.percentile.unwrap_or(0.0);
                push(&format!("speedup_p{pct}"), x, row.speedup);
                push(
                    &format!("qae_p{pct}"),
                    x,
                    row.stats(EstimatorId::Qae).and_then(|e| e.rmse_vs_bins),
                );
                push(
                    &format!("binned_mc_p{pct}"),
                    x,
                    row.stats(EstimatorId::BinnedMc).and_then(|e| e.rmse_vs_bins),
                );
            }
            ExperimentId::Binning => {
                let x = row.n_qubits.unwrap_or(0) as f64;
                let scheme = row.scheme.map(|s| s.to_string()).unwrap_or_default();
                push(&format!("disc_error_{scheme}"), x, row.disc_error);
                push(&format!("speedup_{scheme}"), x, row.speedup);
            }
        }
    }
    series
}

/// Write `report.csv`, `summary` (JSON), and `plots/<series>.dat` under
/// `out_dir/<experiment>/`.
pub fn write_report(report: &ExperimentReport, out_dir: &Path) -> Result<PathBuf, HarnessError> {
    let dir = out_dir.join(report.experiment.to_string());
    let plots = dir.join("plots");
    std::fs::create_dir_all(&plots)
        .map_err(|source| HarnessError::Io { path: plots.clone(), source })?;

    let csv_path = dir.join("report.csv");
    std::fs::write(&csv_path, report_csv(report))
        .map_err(|source| HarnessError::Io { path: csv_path, source })?;

    let summary_path = dir.join("summary");
    let summary = serde_json::to_string_pretty(report).expect("report serializes");
    std::fs::write(&summary_path, summary)
        .map_err(|source| HarnessError::Io { path: summary_path, source })?;

    for (name, points) in plot_series(report) {
        let mut body = String::new();
        for (x, y) in points {
            writeln!(body, "{x} {y}").expect("string write");
        }
        let path = plots.join(format!("{name}.dat"));
        std::fs::write(&path, body).map_err(|source| HarnessError::Io { path, source })?;
    }
    Ok(dir)
}
