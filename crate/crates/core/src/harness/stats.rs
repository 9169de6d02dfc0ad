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

//! RMSE and bootstrapped log-log convergence slopes.

use super::HarnessError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Root-mean-squared error of estimates against a stated ground truth.
pub fn rmse(estimates: &[f64], truth: f64) -> Result<f64, HarnessError> {
    if estimates.is_empty() {
        return Err(HarnessError::EmptyEstimates);
    }
    let ss: f64 = estimates.iter().map(|e| (e - truth).powi(2)).sum();
    Ok((ss / estimates.len() as f64).sqrt())
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// A fitted log-log convergence exponent with bootstrap confidence interval.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopeFit {
    pub series: String,
    pub slope: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub r_squared: f64,
    pub excluded_budgets: Vec<u64>,
}

fn ols_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    (slope, intercept)
}

/// OLS fit of log RMSE against log budget, with a bootstrap CI obtained by
/// resampling the per-budget repetition errors with replacement, recomputing
/// each budget's RMSE, and refitting. The CI is the 2.5/97.5 percentile of
/// the resampled slopes; budgets whose RMSE is zero are excluded.
pub fn fit_loglog_slope(
    budgets: &[u64],
    errors_per_budget: &[Vec<f64>],
    resamples: u32,
    seed: u64,
    series: &str,
) -> Result<SlopeFit, HarnessError> {
    if budgets.len() != errors_per_budget.len() {
        return Err(HarnessError::Config("budget/error length mismatch".into()));
    }
    let mut excluded_budgets = Vec::new();
    let mut kept: Vec<(u64, &Vec<f64>, f64)> = Vec::new();
    for (&b, errs) in budgets.iter().zip(errors_per_budget) {
        if errs.len() < 2 {
            return Err(HarnessError::Config(format!("budget {b} has fewer than 2 repetitions")));
        }
        let r = (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt();
        if r > 0.0 {
            kept.push((b, errs, r));
        } else {
            excluded_budgets.push(b);
        }
    }
    if kept.len() < 3 {
        return Err(HarnessError::Config(format!(
            "need at least 3 budgets with nonzero RMSE, have {}",
            kept.len()
        )));
    }

    let xs: Vec<f64> = kept.iter().map(|(b, _, _)| (*b as f64).ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|(_, _, r)| r.ln()).collect();
    let (slope, intercept) = ols_slope(&xs, &ys);

    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 =
        xs.iter().zip(&ys).map(|(x, y)| (y - (slope * x + intercept)).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slopes = Vec::with_capacity(resamples as usize);
    for _ in 0..resamples {
        let mut bys = Vec::with_capacity(kept.len());
        let mut bxs = Vec::with_capacity(kept.len());
        for ((_, errs, _), &x) in kept.iter().zip(&xs) {
            let n = errs.len();
            let ss: f64 = (0..n)
                .map(|_| {
                    let e = errs[rng.random_range(0..n)];
                    e * e
                })
                .sum();
            let r = (ss / n as f64).sqrt();
            if r > 0.0 {
                bxs.push(x);
                bys.push(r.ln());
            }
        }
        if bxs.len() >= 3 {
            slopes.push(ols_slope(&bxs, &bys).0);
        }
    }
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pick = |q: f64| -> f64 {
        if slopes.is_empty() {
            return slope;
        }
        let idx = ((slopes.len() - 1) as f64 * q).round() as usize;
        slopes[idx]
    };

    Ok(SlopeFit {
        series: series.to_string(),
        slope,
        ci_low: pick(0.025),
        ci_high: pick(0.975),
        r_squared,
        excluded_budgets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rmse_trivial_cases() {
        assert_eq!(rmse(&[5.0, 5.0, 5.0], 5.0).unwrap(), 0.0);
        assert!((rmse(&[6.0, 4.0], 5.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(rmse(&[], 1.0), Err(HarnessError::EmptyEstimates)));
    }

    /// Synthetic power-law error matrices: per-budget errors of magnitude
    /// c / B^q with alternating sign recover slope -q.
    fn power_law_errors(budgets: &[u64], c: f64, q: f64, reps: usize) -> Vec<Vec<f64>> {
        budgets
            .iter()
            .map(|&b| {
                let mag = c / (b as f64).powf(q);
                (0..reps).map(|r| if r % 2 == 0 { mag } else { -mag }).collect()
            })
            .collect()
    }

    #[test]
    fn slope_oracle_recovers_half() {
        let budgets = [500u64, 1000, 2000, 4000, 8000, 16000];
        let errors = power_law_errors(&budgets, 1000.0, 0.5, 10);
        let fit = fit_loglog_slope(&budgets, &errors, 2000, 1, "test").unwrap();
        assert!((fit.slope + 0.5).abs() < 0.02, "slope {}", fit.slope);
        assert!(fit.r_squared > 0.999);
    }

    #[test]
    fn slope_oracle_recovers_one() {
        let budgets = [500u64, 1000, 2000, 4000, 8000, 16000];
        let errors = power_law_errors(&budgets, 1000.0, 1.0, 10);
        let fit = fit_loglog_slope(&budgets, &errors, 2000, 2, "test").unwrap();
        assert!((fit.slope + 1.0).abs() < 0.02, "slope {}", fit.slope);
    }

    #[test]
    fn noisy_power_law_ci_brackets_truth() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let budgets = [512u64, 1024, 2048, 4096, 8192];
        let errors: Vec<Vec<f64>> = budgets
            .iter()
            .map(|&b| {
                let sd = 2000.0 / (b as f64).sqrt();
                (0..40).map(|_| sd * normal_draw(&mut rng)).collect()
            })
            .collect();
        let fit = fit_loglog_slope(&budgets, &errors, 2000, 3, "noisy").unwrap();
        assert!(fit.ci_low < -0.5 && -0.5 < fit.ci_high, "{fit:?}");
        assert!(fit.ci_low < fit.slope && fit.slope < fit.ci_high);

        fn normal_draw(rng: &mut ChaCha8Rng) -> f64 {
            // Box-Muller is plenty for a test.
            let u1: f64 = rng.random::<f64>().max(1e-12);
            let u2: f64 = rng.random();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        }
    }

    #[test]
    fn zero_rmse_budget_is_excluded() {
        let budgets = [100u64, 200, 400, 800];
        let mut errors = power_law_errors(&budgets, 10.0, 0.5, 6);
        errors[1] = vec![0.0; 6];
        let fit = fit_loglog_slope(&budgets, &errors, 200, 4, "z").unwrap();
        assert_eq!(fit.excluded_budgets, vec![200]);
        assert!((fit.slope + 0.5).abs() < 0.02);
    }

    #[test]
    fn too_few_budgets_rejected() {
        let budgets = [100u64, 200];
        let errors = power_law_errors(&budgets, 10.0, 0.5, 4);
        assert!(fit_loglog_slope(&budgets, &errors, 100, 0, "x").is_err());
    }
}
