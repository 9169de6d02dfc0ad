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

//! Shared helpers for the integration and acceptance suites.

#![allow(dead_code)]

use std::path::PathBuf;
use tailqae::dist::LognormalParams;
use tailqae::ingest::{generate_pareto, load_noaa, LossDataset, Manifest};

/// The canonical synthetic severity model: the lognormal fitted to 20,000
/// Pareto(1.5, $50k) draws. Sigma is the unrounded fit (1/alpha); the
/// two-decimal display value 0.67 does not reproduce the pinned dollar
/// quantities.
pub fn synthetic_params() -> LognormalParams {
    LognormalParams::new(11.4845, 0.667).unwrap()
}

/// The pinned 95th-percentile attachment point for the synthetic model.
pub const SYNTHETIC_M95: f64 = 362_700.0;

/// The live synthetic dataset used by the experiment pipeline.
pub fn synthetic_dataset() -> LossDataset {
    generate_pareto(20_000, 1.5, 50_000.0, 42).unwrap()
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/noaa")
}

/// The committed NOAA-schema fixture (synthetic stand-in reproducing the
/// pinned snapshot's fit, percentiles, and bin-level statistics).
pub fn noaa_fixture() -> LossDataset {
    let dir = fixture_dir();
    let manifest = Manifest::load(&dir).expect("fixture manifest present");
    load_noaa(&manifest, &dir, true).expect("fixture loads offline")
}

/// Adaptive Simpson quadrature in log coordinates; the independent oracle
/// for closed-form excess-loss values.
pub fn quadrature_excess(params: &LognormalParams, m: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let whole = simpson(f, a, b);
        let halves = simpson(f, a, m) + simpson(f, m, b);
        if depth == 0 || (halves - whole).abs() < 15.0 * tol {
            halves + (halves - whole) / 15.0
        } else {
            adapt(f, a, m, tol / 2.0, depth - 1) + adapt(f, m, b, tol / 2.0, depth - 1)
        }
    }
    let upper = params.inv_cdf(1.0 - 1e-13).unwrap().max(m * 1.0001);
    let f = move |y: f64| {
        let x = y.exp();
        (x - m) * params.pdf(x).unwrap() * x
    };
    adapt(&f, m.ln(), upper.ln(), params.mean() * 1e-10, 40)
}
