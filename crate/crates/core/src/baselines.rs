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

//! Classical estimators of the expected excess loss at explicit query
//! budgets: naive Monte Carlo, conditional tail sampling, importance
//! sampling with an exponential tilt, sampling from the discretized bins,
//! and quasi-Monte Carlo over a scrambled Sobol sequence.
//!
//! Every estimator consumes exactly `budget` draws and is deterministic
//! for a given seed.

use crate::dist::{BinnedDistribution, LognormalParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Stable estimator names used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorId {
    Naive,
    ConditionalTail,
    ImportanceSampling,
    Qmc,
    BinnedMc,
    Qae,
    NaiveResample,
    ExactBins,
}

impl std::fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EstimatorId::Naive => "naive",
            EstimatorId::ConditionalTail => "conditional_tail",
            EstimatorId::ImportanceSampling => "importance_sampling",
            EstimatorId::Qmc => "qmc_sobol",
            EstimatorId::BinnedMc => "binned_mc",
            EstimatorId::Qae => "qae",
            EstimatorId::NaiveResample => "naive_resample",
            EstimatorId::ExactBins => "exact_bins",
        };
        write!(f, "{s}")
    }
}

/// One estimator run: a dollar estimate and the query budget it consumed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub estimate: f64,
    pub queries: u64,
    pub estimator: EstimatorId,
    pub seed: u64,
    pub rep_index: u32,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draw from the fitted lognormal by inverse-CDF on a uniform.
fn draw_lognormal(params: &LognormalParams, rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.random();
    // random() is in [0, 1); reflect avoids the inv_cdf(0) pole.
    let u = if u <= 0.0 { f64::MIN_POSITIVE } else { u };
    params.inv_cdf(u).expect("u in (0,1)")
}

/// Naive Monte Carlo: mean of `max(0, X_i - M)` over i.i.d. lognormal draws.
pub fn naive_mc(params: &LognormalParams, threshold_m: f64, budget: u64, seed: u64) -> EstimatorResult {
    assert!(budget >= 1);
    let mut rng = rng_for(seed);
    let mut acc = 0.0;
    for _ in 0..budget {
        let x = draw_lognormal(params, &mut rng);
        acc += (x - threshold_m).max(0.0);
    }
    EstimatorResult {
        estimate: acc / budget as f64,
        queries: budget,
        estimator: EstimatorId::Naive,
        seed,
        rep_index: 0,
    }
}

/// Conditional tail Monte Carlo: sample `X | X > M` through the truncated
/// inverse CDF and rescale the mean excess by `P(X > M)`.
pub fn conditional_tail_mc(
    params: &LognormalParams,
    threshold_m: f64,
    budget: u64,
    seed: u64,
) -> EstimatorResult {
    assert!(budget >= 1);
    let f_m = params.cdf(threshold_m).expect("threshold > 0");
    let tail_prob = 1.0 - f_m;
    let mut estimate = 0.0;
    if tail_prob > 0.0 {
        let mut rng = rng_for(seed);
        let mut acc = 0.0;
        for _ in 0..budget {
            let v: f64 = rng.random();
            let u = f_m + v * tail_prob;
            let u = u.min(1.0 - 1e-16);
            let x = params.inv_cdf(u).expect("u in (0,1)");
            acc += x - threshold_m;
        }
        estimate = tail_prob * acc / budget as f64;
    }
    EstimatorResult {
        estimate,
        queries: budget,
        estimator: EstimatorId::ConditionalTail,
        seed,
        rep_index: 0,
    }
}

/// Importance sampling with the exponential tilt
/// `delta = max(0, ln M - mu - sigma^2/2)`, which shifts the proposal mean
/// to roughly the threshold. Weights are the exact ratio of the two
/// lognormal densities, accumulated in log space.
pub fn importance_sampling_mc(
    params: &LognormalParams,
    threshold_m: f64,
    budget: u64,
    seed: u64,
) -> EstimatorResult {
    assert!(budget >= 1);
    let (mu, sigma) = (params.mu, params.sigma);
    let delta = (threshold_m.ln() - mu - 0.5 * sigma * sigma).max(0.0);
    let proposal = LognormalParams::new(mu + delta, sigma).expect("valid proposal");
    let mut rng = rng_for(seed);
    let mut acc = 0.0;
    for _ in 0..budget {
        let x = draw_lognormal(&proposal, &mut rng);
        let payoff = (x - threshold_m).max(0.0);
        if payoff > 0.0 {
            // ln w = ln f_target(x) - ln f_proposal(x)
            //      = delta^2/(2 sigma^2) - delta (ln x - mu) / sigma^2.
            let log_w =
                delta * delta / (2.0 * sigma * sigma) - delta * (x.ln() - mu) / (sigma * sigma);
            acc += payoff * log_w.exp();
        }
    }
    EstimatorResult {
        estimate: acc / budget as f64,
        queries: budget,
        estimator: EstimatorId::ImportanceSampling,
        seed,
        rep_index: 0,
    }
}

/// Categorical sampling from the discretized bins.
pub fn binned_mc(
    binned: &BinnedDistribution,
    threshold_m: f64,
    budget: u64,
    seed: u64,
) -> EstimatorResult {
    assert!(budget >= 1);
    let mut cumulative = Vec::with_capacity(binned.probs.len());
    let mut acc = 0.0;
    for &p in &binned.probs {
        acc += p;
        cumulative.push(acc);
    }
    let mut rng = rng_for(seed);
    let mut total = 0.0;
    for _ in 0..budget {
        let u: f64 = rng.random();
        let i = cumulative.partition_point(|&c| c <= u).min(binned.probs.len() - 1);
        total += (binned.midpoints[i] - threshold_m).max(0.0);
    }
    EstimatorResult {
        estimate: total / budget as f64,
        queries: budget,
        estimator: EstimatorId::BinnedMc,
        seed,
        rep_index: 0,
    }
}

/// Resample with replacement from raw empirical losses.
pub fn naive_resample_mc(
    losses: &[f64],
    threshold_m: f64,
    budget: u64,
    seed: u64,
) -> EstimatorResult {
    assert!(budget >= 1 && !losses.is_empty());
    let mut rng = rng_for(seed);
    let mut acc = 0.0;
    for _ in 0..budget {
        let i = rng.random_range(0..losses.len());
        acc += (losses[i] - threshold_m).max(0.0);
    }
    EstimatorResult {
        estimate: acc / budget as f64,
        queries: budget,
        estimator: EstimatorId::NaiveResample,
        seed,
        rep_index: 0,
    }
}

/// One-dimensional Sobol points (gray-code radical-inverse construction),
/// skipping the initial zero point. Scrambling applies a random 32-bit
/// digital XOR shift derived from the seed.
///
/// The first unscrambled points are 0.5, 0.75, 0.25, 0.375, ...
pub fn sobol_sequence(count: u64, seed: u64, scramble: bool) -> Vec<f64> {
    assert!(count >= 1);
    let shift: u32 = if scramble { rng_for(seed).random() } else { 0 };
    let mut points = Vec::with_capacity(count as usize);
    let mut x: u32 = 0;
    for j in 1..=count {
        // Direction numbers for dimension one are 2^(31-i); gray-code
        // stepping XORs the direction picked by the lowest zero... i.e. the
        // number of trailing zeros of the index.
        let bit = j.trailing_zeros();
        x ^= 1u32 << (31 - bit);
        points.push((x ^ shift) as f64 / 4294967296.0);
    }
    points
}

/// Quasi-Monte Carlo: push a scrambled Sobol batch through the inverse CDF.
pub fn qmc_sobol(params: &LognormalParams, threshold_m: f64, budget: u64, seed: u64) -> EstimatorResult {
    assert!(budget >= 1);
    let points = sobol_sequence(budget, seed, true);
    let mut acc = 0.0;
    for u in points {
        let u = u.clamp(f64::MIN_POSITIVE, 1.0 - 1e-16);
        let x = params.inv_cdf(u).expect("u in (0,1)");
        acc += (x - threshold_m).max(0.0);
    }
    EstimatorResult {
        estimate: acc / budget as f64,
        queries: budget,
        estimator: EstimatorId::Qmc,
        seed,
        rep_index: 0,
    }
}
