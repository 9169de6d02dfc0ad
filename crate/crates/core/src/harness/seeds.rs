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

//! Deterministic per-repetition seed streams.
//!
//! A single master seed cannot pin every random stream across concurrent
//! repetitions, so each (experiment, estimator, configuration, repetition)
//! tuple derives its own seed. The hash is fixed and documented: FNV-1a
//! (offset 0xcbf29ce484222325, prime 0x100000001b3) over the master seed,
//! the experiment and estimator names separated by 0xff, and the two
//! indices, finished with the splitmix64 mixer. Results are therefore
//! independent of execution schedule and stable across platforms.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a_bytes(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the RNG seed for one estimator repetition.
pub fn derive_seed(
    master_seed: u64,
    experiment: &str,
    estimator: &str,
    config_index: u64,
    rep_index: u64,
) -> u64 {
    let mut h = FNV_OFFSET;
    h = fnv1a_bytes(h, &master_seed.to_le_bytes());
    h = fnv1a_bytes(h, experiment.as_bytes());
    h = fnv1a_bytes(h, &[0xff]);
    h = fnv1a_bytes(h, estimator.as_bytes());
    h = fnv1a_bytes(h, &[0xff]);
    h = fnv1a_bytes(h, &config_index.to_le_bytes());
    h = fnv1a_bytes(h, &rep_index.to_le_bytes());
    splitmix64(h)
}
