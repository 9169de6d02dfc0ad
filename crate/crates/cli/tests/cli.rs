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

//! End-to-end checks of the tailqae binary: subcommands, outputs, and the
//! documented exit codes (0 ok, 2 config error, 3 data error, 4 failed
//! threshold check).

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tailqae"))
}

fn fixture_cache() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/noaa")
}

#[test]
fn run_writes_report_summary_and_plots() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["run", "exp1", "--fast", "--seed", "42", "--out"])
        .arg(out.path())
        .status()
        .unwrap();
    assert!(status.success());
    let dir = out.path().join("exp1");
    assert!(dir.join("report.csv").exists());
    assert!(dir.join("summary").exists());
    assert!(dir.join("plots/quantum_rmse.dat").exists());
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    assert!(csv.lines().next().unwrap().starts_with("experiment,dataset,row_label"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let out1 = tempfile::tempdir().unwrap();
    let out2 = tempfile::tempdir().unwrap();
    for out in [&out1, &out2] {
        let status = bin()
            .args(["run", "exp1", "--fast", "--seed", "7", "--out"])
            .arg(out.path())
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(out1.path().join("exp1/report.csv")).unwrap();
    let b = std::fs::read(out2.path().join("exp1/report.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn unknown_experiment_is_config_error() {
    let status = bin().args(["run", "exp99"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn missing_noaa_cache_is_data_error() {
    let empty = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["run", "exp4a", "--offline", "--cache"])
        .arg(empty.path())
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn noaa_experiment_runs_from_fixture_cache() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["run", "exp4b", "--fast", "--offline", "--cache"])
        .arg(fixture_cache())
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.path().join("exp4b/report.csv").exists());
}

#[test]
fn check_flag_passes_on_healthy_run() {
    let out = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["run", "exp1", "--fast", "--check", "--seed", "42", "--out"])
        .arg(out.path())
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(String::from_utf8_lossy(&output.stdout).contains("all threshold checks passed"));
}

#[test]
fn config_file_overrides_defaults_and_flags_win() {
    let out = tempfile::tempdir().unwrap();
    let cfg = out.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"shots": 64, "repetitions": 3, "k_values": [0, 1, 2], "master_seed": 1}"#)
        .unwrap();
    let status = bin()
        .args(["run", "exp1", "--seed", "42", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert!(status.success());
    let summary = std::fs::read_to_string(out.path().join("exp1/summary")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    // The --seed flag wins over the file's master_seed.
    assert_eq!(v["master_seed"], 42);
}

#[test]
fn bad_config_file_is_config_error() {
    let out = tempfile::tempdir().unwrap();
    let cfg = out.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"no_such_field": true}"#).unwrap();
    let status = bin().args(["run", "exp1", "--config"]).arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn check_flag_exits_4_on_violated_threshold() {
    // A 16-bin quantile PMF holds 1/16 mass in the tail bin, so the safe
    // iteration count is 2, violating exp7's "single Grover iteration"
    // check deterministically.
    let out = tempfile::tempdir().unwrap();
    let cfg = out.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"n_qubits": [4], "repetitions": 4}"#).unwrap();
    let status = bin()
        .args(["run", "exp7", "--offline", "--check", "--cache"])
        .arg(fixture_cache())
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(4));
}

#[test]
fn ingest_synthetic_exports_losses() {
    let out = tempfile::tempdir().unwrap();
    let path = out.path().join("losses.txt");
    let output = bin()
        .args(["ingest", "synthetic", "--count", "50", "--seed", "3", "--export"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(output.status.success());
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().count(), 50);
}

#[test]
fn ingest_noaa_offline_reports_counts() {
    let output = bin()
        .args(["ingest", "noaa", "--offline", "--cache"])
        .arg(fixture_cache())
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("8000 records kept"), "{stdout}");
}

#[test]
fn project_resources_reference_point() {
    let output = bin()
        .args([
            "project-resources",
            "--classical-n",
            "10000",
            "--classical-cost",
            "60",
            "--depth",
            "200000",
            "--gate-time",
            "1e-6",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("30000.0x"), "{stdout}");
}

#[test]
fn project_resources_rejects_nonpositive() {
    let status = bin()
        .args(["project-resources", "--classical-n", "0", "--classical-cost", "60", "--depth", "1", "--gate-time", "1e-6"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}
