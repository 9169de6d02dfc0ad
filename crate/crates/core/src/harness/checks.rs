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

//! Per-experiment pass/fail thresholds. `run --check` exits nonzero when any
//! fails; the acceptance test suite calls the same functions, so there is a
//! single source of truth for every tolerance.

use super::{ExperimentId, ExperimentReport, ReportRow};
use crate::baselines::EstimatorId;

/// One violated threshold.
#[derive(Debug, Clone)]
pub struct CheckFailure {
    pub criterion: String,
    pub detail: String,
}

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.criterion, self.detail)
    }
}

struct Checker {
    failures: Vec<CheckFailure>,
}

impl Checker {
    fn new() -> Self {
        Checker { failures: Vec::new() }
    }

    fn require(&mut self, ok: bool, criterion: &str, detail: String) {
        if !ok {
            self.failures.push(CheckFailure { criterion: criterion.to_string(), detail });
        }
    }
}

fn rmse_bins(row: &ReportRow, id: EstimatorId) -> Option<f64> {
    row.stats(id).and_then(|e| e.rmse_vs_bins)
}

/// Evaluate the report against its experiment's thresholds.
pub fn check_report(report: &ExperimentReport) -> Vec<CheckFailure> {
    let mut c = Checker::new();
    match report.experiment {
        ExperimentId::Exp1 | ExperimentId::Exp4a => check_convergence(report, &mut c),
        ExperimentId::Exp2 => check_noise(report, &mut c),
        ExperimentId::Exp3 => check_tail_synthetic(report, &mut c),
        ExperimentId::Exp4b => check_tail_noaa(report, &mut c),
        ExperimentId::Exp5 => check_budget_match(report, &mut c),
        ExperimentId::Exp6 => check_qubit_sweep(report, &mut c),
        ExperimentId::Exp7 => check_empirical(report, &mut c),
        ExperimentId::Binning => check_binning(report, &mut c),
    }
    c.failures
}

fn slope_of<'a>(report: &'a ExperimentReport, series: &str) -> Option<&'a super::SlopeFit> {
    report.slope_fits.iter().find(|s| s.series == series)
}

fn check_convergence(report: &ExperimentReport, c: &mut Checker) {
    let Some(q) = slope_of(report, "quantum") else {
        c.require(false, "slope", "missing quantum slope fit".into());
        return;
    };
    let Some(cb) = slope_of(report, "classical_bins") else {
        c.require(false, "slope", "missing classical slope fit".into());
        return;
    };
    c.require(
        q.slope <= -0.85,
        "quantum_slope",
        format!("point estimate {} > -0.85", q.slope),
    );
    c.require(
        q.ci_high < -0.5,
        "quantum_slope_ci",
        format!("CI [{}, {}] does not exclude -0.5", q.ci_low, q.ci_high),
    );
    c.require(
        cb.ci_low <= -0.40 && cb.ci_high >= -0.65,
        "classical_slope_ci",
        format!("CI [{}, {}] misses [-0.65, -0.40]", cb.ci_low, cb.ci_high),
    );
    c.require(
        q.slope < cb.slope,
        "slope_ordering",
        format!("quantum {} not below classical {}", q.slope, cb.slope),
    );
    if let Some(last) = report.rows.last() {
        if let Some(speedup) = last.speedup {
            c.require(
                (1.5..=3.5).contains(&speedup),
                "k6_speedup",
                format!("speedup {speedup} outside [1.5, 3.5]"),
            );
        }
    }
}

fn check_noise(report: &ExperimentReport, c: &mut Checker) {
    let find = |name: &str| {
        report.rows.iter().find(|r| r.noise_preset.as_deref() == Some(name))
    };
    let (Some(noiseless), Some(low), Some(medium), Some(high)) =
        (find("noiseless"), find("low"), find("medium"), find("high"))
    else {
        c.require(false, "noise_rows", "missing preset rows".into());
        return;
    };
    let r0 = rmse_bins(noiseless, EstimatorId::Qae).unwrap_or(f64::NAN);
    let rl = rmse_bins(low, EstimatorId::Qae).unwrap_or(f64::NAN);
    let rm = rmse_bins(medium, EstimatorId::Qae).unwrap_or(f64::NAN);
    let rh = rmse_bins(high, EstimatorId::Qae).unwrap_or(f64::NAN);
    c.require(r0 <= 100.0, "noiseless_rmse", format!("noiseless RMSE {r0} > $100"));
    c.require(rl >= 10.0 * r0, "low_rmse", format!("low RMSE {rl} < 10x noiseless {r0}"));
    let low_bias = low.stats(EstimatorId::Qae).and_then(|e| e.bias).unwrap_or(f64::NAN);
    c.require(low_bias > 0.0, "low_bias", format!("low-noise bias {low_bias} not positive"));
    let gap = (rm - rh).abs() / rm.max(rh);
    c.require(gap <= 0.25, "saturation", format!("medium {rm} vs high {rh}: gap {gap:.2} > 25%"));
}

fn amplified_rows(report: &ExperimentReport) -> Vec<&ReportRow> {
    report.rows.iter().filter(|r| !r.label.ends_with("_k0")).collect()
}

fn check_tail_synthetic(report: &ExperimentReport, c: &mut Checker) {
    let rows = amplified_rows(report);
    let mut prev: Option<f64> = None;
    for row in rows {
        let Some(speedup) = row.speedup else { continue };
        c.require(
            (1.0..=4.0).contains(&speedup),
            "tail_speedup",
            format!("{}: speedup {speedup} outside [1.0, 4.0]", row.label),
        );
        if let Some(p) = prev {
            c.require(
                speedup >= p,
                "speedup_monotone",
                format!("{}: speedup {speedup} below previous {p}", row.label),
            );
        }
        prev = Some(speedup);
    }
}

fn check_tail_noaa(report: &ExperimentReport, c: &mut Checker) {
    for row in amplified_rows(report) {
        let pct = row.percentile.unwrap_or(0.0);
        if (pct - 90.0).abs() < 1e-9 {
            c.require(row.pathological, "pathological_flag", "90th row not flagged".into());
            let disc = row.disc_error.unwrap_or(0.0);
            let analytic = row.analytic_truth.unwrap_or(f64::INFINITY);
            c.require(
                disc > analytic,
                "pathological_disc",
                format!("disc {disc} not above analytic {analytic}"),
            );
        } else if let Some(speedup) = row.speedup {
            c.require(
                (1.5..=3.5).contains(&speedup),
                "tail_speedup",
                format!("p{pct}: speedup {speedup} outside [1.5, 3.5]"),
            );
        }
    }
}

fn check_budget_match(report: &ExperimentReport, c: &mut Checker) {
    let top_budget = report.rows.iter().filter_map(|r| r.budget).max().unwrap_or(0);
    let mut qmc_at_top: Vec<f64> = Vec::new();
    for row in &report.rows {
        let anal = |id: EstimatorId| row.stats(id).and_then(|e| e.rmse_vs_analytic);
        let (Some(naive), Some(ct), Some(qmc)) = (
            anal(EstimatorId::Naive),
            anal(EstimatorId::ConditionalTail),
            anal(EstimatorId::Qmc),
        ) else {
            continue;
        };
        c.require(
            ct < naive,
            "ordering_ct",
            format!("{}: CT {ct} not below naive {naive}", row.label),
        );
        c.require(
            qmc < naive,
            "ordering_qmc",
            format!("{}: QMC {qmc} not below naive {naive}", row.label),
        );
        if row.budget == Some(top_budget) {
            qmc_at_top.push(qmc);
            if row.percentile == Some(97.0) {
                c.require(ct <= 30.0, "ct_97", format!("CT RMSE {ct} > $30 at 97th"));
            }
            c.require(
                (15.0..=90.0).contains(&qmc),
                "qmc_band",
                format!("{}: QMC RMSE {qmc} outside [$15, $90]", row.label),
            );
        }
    }
    if qmc_at_top.len() >= 2 {
        let max = qmc_at_top.iter().cloned().fold(f64::MIN, f64::max);
        let min = qmc_at_top.iter().cloned().fold(f64::MAX, f64::min);
        c.require(
            max / min < 2.0,
            "qmc_flatness",
            format!("QMC RMSE varies {max}/{min} >= 2x across percentiles"),
        );
    }
}

fn check_qubit_sweep(report: &ExperimentReport, c: &mut Checker) {
    let discs: Vec<f64> = report.rows.iter().filter_map(|r| r.disc_error).collect();
    if !discs.is_empty() {
        let mean = discs.iter().sum::<f64>() / discs.len() as f64;
        for (row, &d) in report.rows.iter().zip(&discs) {
            c.require(
                (d - mean).abs() <= 0.3 * mean,
                "disc_band",
                format!("{}: disc {d} outside +-30% of mean {mean}", row.label),
            );
        }
    }
    let mut prev_gates = 0usize;
    for row in &report.rows {
        if let Some(speedup) = row.speedup {
            if row.n_qubits.unwrap_or(0) <= 6 {
                c.require(
                    (2.0..=4.0).contains(&speedup),
                    "estimation_ratio",
                    format!("{}: quantum/classical ratio {speedup} outside [2, 4]", row.label),
                );
            }
        }
        if let Some(g) = row.sp_two_qubit_gates {
            c.require(
                g > prev_gates,
                "gate_growth",
                format!("{}: SP two-qubit count {g} not above {prev_gates}", row.label),
            );
            prev_gates = g;
        }
    }
}

fn check_empirical(report: &ExperimentReport, c: &mut Checker) {
    let top_budget = report.rows.iter().filter_map(|r| r.budget).max().unwrap_or(0);
    for row in &report.rows {
        c.require(
            row.grover_k == Some(1),
            "empirical_k",
            format!("{}: k used {:?} != 1", row.label, row.grover_k),
        );
        if row.budget == Some(top_budget) {
            if let Some(speedup) = row.speedup {
                c.require(
                    (1.2..=3.0).contains(&speedup),
                    "empirical_speedup",
                    format!("{}: speedup {speedup} outside [1.2, 3.0]", row.label),
                );
            }
        }
    }
}

fn check_binning(report: &ExperimentReport, c: &mut Checker) {
    let find = |scheme: crate::dist::BinningScheme, n: u32| {
        report.rows.iter().find(|r| r.scheme == Some(scheme) && r.n_qubits == Some(n))
    };
    use crate::dist::BinningScheme::{EqualWidth, LogSpaced};
    if let (Some(eq3), Some(ls3)) = (find(EqualWidth, 3), find(LogSpaced, 3)) {
        let (de, dl) = (eq3.disc_error.unwrap(), ls3.disc_error.unwrap());
        c.require(
            dl > de,
            "n3_reversal",
            format!("log-spaced n=3 disc {dl} not above equal-width {de}"),
        );
    }
    if let (Some(eq4), Some(ls4)) = (find(EqualWidth, 4), find(LogSpaced, 4)) {
        let (de, dl) = (eq4.disc_error.unwrap(), ls4.disc_error.unwrap());
        c.require(
            dl <= de / 3.0,
            "n4_improvement",
            format!("log-spaced n=4 disc {dl} not <= equal-width/3 ({de}/3)"),
        );
    }
    for n in [4u32, 5] {
        if let (Some(eq), Some(ls)) = (find(EqualWidth, n), find(LogSpaced, n)) {
            let (ke, kl) = (eq.k_max.unwrap_or(0), ls.k_max.unwrap_or(0));
            c.require(
                kl > ke,
                "kmax_headroom",
                format!("n={n}: log-spaced k_max {kl} not above equal-width {ke}"),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{DatasetKind, EstimatorStats};

    fn noise_row(name: &str, rmse: f64, bias: f64) -> ReportRow {
        ReportRow {
            label: format!("noise={name}"),
            noise_preset: Some(name.into()),
            estimators: vec![EstimatorStats {
                estimator: EstimatorId::Qae,
                queries: 1,
                rmse_vs_bins: Some(rmse),
                rmse_vs_analytic: None,
                mean_estimate: 0.0,
                std_estimate: 0.0,
                bias: Some(bias),
            }],
            ..Default::default()
        }
    }

    fn noise_report(rows: Vec<ReportRow>) -> ExperimentReport {
        ExperimentReport {
            experiment: ExperimentId::Exp2,
            dataset: DatasetKind::Synthetic,
            master_seed: 42,
            fast: true,
            notes: vec![],
            rows,
            slope_fits: vec![],
        }
    }

    #[test]
    fn noise_checks_pass_on_expected_shape() {
        let report = noise_report(vec![
            noise_row("noiseless", 35.0, 1.0),
            noise_row("low", 1500.0, 1400.0),
            noise_row("medium", 2100.0, 2000.0),
            noise_row("high", 2150.0, 2050.0),
        ]);
        assert!(check_report(&report).is_empty());
    }

    #[test]
    fn noise_checks_catch_violations() {
        let report = noise_report(vec![
            noise_row("noiseless", 150.0, 1.0),
            noise_row("low", 200.0, -5.0),
            noise_row("medium", 2100.0, 2000.0),
            noise_row("high", 900.0, 800.0),
        ]);
        let failures = check_report(&report);
        let names: Vec<&str> = failures.iter().map(|f| f.criterion.as_str()).collect();
        assert!(names.contains(&"noiseless_rmse"));
        assert!(names.contains(&"low_rmse"));
        assert!(names.contains(&"low_bias"));
        assert!(names.contains(&"saturation"));
    }
}
