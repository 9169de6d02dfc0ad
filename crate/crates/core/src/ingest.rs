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

//! Loss-data acquisition: synthetic Pareto severities and NOAA Storm Events
//! property-damage records, downloaded once into a local cache and pinned by
//! a manifest. Analysis never reaches the network when the cache is warm;
//! tests run against committed fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("invalid generator parameter: {0}")]
    InvalidParam(String),
    #[error("unparseable damage field '{0}'")]
    UnparseableDamage(String),
    #[error("cache file {0} missing and offline mode is set")]
    MissingCache(PathBuf),
    #[error("manifest lists no files")]
    EmptyManifest,
    #[error("column {0} not found in NOAA CSV header")]
    MissingColumn(String),
    #[error("dataset is empty after filtering")]
    EmptyDataset,
    #[error("download of {url} failed: {reason}")]
    Download { url: String, reason: String },
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv error in {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("manifest error: {0}")]
    Manifest(String),
}

/// Where a dataset came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    SyntheticPareto,
    Noaa,
}

/// A flat vector of loss amounts in dollars with provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LossDataset {
    pub losses: Vec<f64>,
    pub source: DataSource,
    pub record_count: usize,
    /// Records dropped because the damage field would not parse.
    pub skipped_records: usize,
    pub provenance: String,
}

impl LossDataset {
    /// Write one loss per line for external audit.
    pub fn export(&self, path: &Path) -> Result<(), IngestError> {
        let mut out = String::with_capacity(self.losses.len() * 12);
        for l in &self.losses {
            out.push_str(&format!("{l:.2}\n"));
        }
        std::fs::write(path, out).map_err(|source| IngestError::Io { path: path.into(), source })
    }
}

/// Pareto Type I severities: `X = x_m U^(-1/alpha)`.
pub fn generate_pareto(
    count: usize,
    alpha: f64,
    x_m: f64,
    seed: u64,
) -> Result<LossDataset, IngestError> {
    if !(alpha > 0.0) {
        return Err(IngestError::InvalidParam(format!("alpha must be > 0, got {alpha}")));
    }
    if !(x_m > 0.0) {
        return Err(IngestError::InvalidParam(format!("x_m must be > 0, got {x_m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let losses: Vec<f64> = (0..count)
        .map(|_| {
            // 1 - random() lies in (0, 1], keeping the draw finite.
            let u = 1.0 - rng.random::<f64>();
            x_m * u.powf(-1.0 / alpha)
        })
        .collect();
    Ok(LossDataset {
        record_count: losses.len(),
        losses,
        source: DataSource::SyntheticPareto,
        skipped_records: 0,
        provenance: format!("pareto(count={count}, alpha={alpha}, x_m={x_m}, seed={seed})"),
    })
}

/// Parse a NOAA property-damage field into dollars.
///
/// Empty fields are `None`; `K`/`M`/`B` suffixes scale by 1e3/1e6/1e9; bare
/// numbers are dollars. Values are rounded to cents. Anything else is an
/// error and the caller skips (and counts) the record.
pub fn parse_damage(field: &str) -> Result<Option<f64>, IngestError> {
    let s = field.trim();
    if s.is_empty() {
        return Ok(None);
    }
    let (number_part, multiplier) = match s.chars().last().unwrap() {
        'K' | 'k' => (&s[..s.len() - 1], 1e3),
        'M' | 'm' => (&s[..s.len() - 1], 1e6),
        'B' | 'b' => (&s[..s.len() - 1], 1e9),
        _ => (s, 1.0),
    };
    let value: f64 = number_part
        .parse()
        .map_err(|_| IngestError::UnparseableDamage(field.to_string()))?;
    if !value.is_finite() || value < 0.0 {
        return Err(IngestError::UnparseableDamage(field.to_string()));
    }
    Ok(Some((value * multiplier * 100.0).round() / 100.0))
}

/// One pinned NOAA detail file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub filename: String,
    pub year: u32,
}

/// The pinned snapshot: which files, from where, retrieved when.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub base_url: String,
    pub files: Vec<ManifestFile>,
    pub retrieved_date: String,
}

/// Manifest filename inside the cache directory.
pub const MANIFEST_NAME: &str = "noaa_manifest";

impl Manifest {
    /// The 2020-2024 Storm Events snapshot the analysis is pinned to.
    pub fn pinned_snapshot() -> Self {
        let files = [
            ("StormEvents_details-ftp_v1.0_d2020_c20260116.csv.gz", 2020),
            ("StormEvents_details-ftp_v1.0_d2021_c20250520.csv.gz", 2021),
            ("StormEvents_details-ftp_v1.0_d2022_c20250721.csv.gz", 2022),
            ("StormEvents_details-ftp_v1.0_d2023_c20260116.csv.gz", 2023),
            ("StormEvents_details-ftp_v1.0_d2024_c20260116.csv.gz", 2024),
        ]
        .into_iter()
        .map(|(filename, year)| ManifestFile { filename: filename.into(), year })
        .collect();
        Manifest {
            base_url: "https://www.ncei.noaa.gov/pub/data/swdi/stormevents/csvfiles/".into(),
            files,
            retrieved_date: "2026-02-27".into(),
        }
    }

    pub fn save(&self, cache_dir: &Path) -> Result<(), IngestError> {
        let path = cache_dir.join(MANIFEST_NAME);
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| IngestError::Manifest(e.to_string()))?;
        std::fs::write(&path, body).map_err(|source| IngestError::Io { path, source })
    }

    pub fn load(cache_dir: &Path) -> Result<Self, IngestError> {
        let path = cache_dir.join(MANIFEST_NAME);
        let body = std::fs::read_to_string(&path)
            .map_err(|source| IngestError::Io { path: path.clone(), source })?;
        serde_json::from_str(&body).map_err(|e| IngestError::Manifest(e.to_string()))
    }
}

/// List Storm Events detail files advertised by the remote index page.
/// Discovery is a convenience for refreshing the manifest; analysis stays
/// pinned to the cached snapshot.
pub fn discover_remote(base_url: &str) -> Result<Vec<ManifestFile>, IngestError> {
    let html = http_get_string(base_url)?;
    let mut files = Vec::new();
    for token in html.split('"') {
        if let Some(year) = storm_detail_year(token) {
            files.push(ManifestFile { filename: token.to_string(), year });
        }
    }
    files.sort_by_key(|f| (f.year, f.filename.clone()));
    files.dedup();
    Ok(files)
}

fn storm_detail_year(name: &str) -> Option<u32> {
    let rest = name.strip_prefix("StormEvents_details-ftp_v1.0_d")?;
    if !name.ends_with(".csv.gz") {
        return None;
    }
    rest.get(0..4)?.parse().ok()
}

fn http_get_string(url: &str) -> Result<String, IngestError> {
    let mut resp = ureq::get(url)
        .call()
        .map_err(|e| IngestError::Download { url: url.into(), reason: e.to_string() })?;
    resp.body_mut()
        .read_to_string()
        .map_err(|e| IngestError::Download { url: url.into(), reason: e.to_string() })
}

fn http_get_bytes(url: &str) -> Result<Vec<u8>, IngestError> {
    let mut resp = ureq::get(url)
        .call()
        .map_err(|e| IngestError::Download { url: url.into(), reason: e.to_string() })?;
    resp.body_mut()
        .with_config()
        .limit(1 << 30)
        .read_to_vec()
        .map_err(|e| IngestError::Download { url: url.into(), reason: e.to_string() })
}

/// Load the NOAA dataset described by `manifest`, downloading any missing
/// file into `cache_dir` unless `offline`. Records with property damage
/// below $1,000 are dropped; unparseable damage fields are skipped and
/// counted. Files are processed in manifest order (ordered by year).
pub fn load_noaa(
    manifest: &Manifest,
    cache_dir: &Path,
    offline: bool,
) -> Result<LossDataset, IngestError> {
    if manifest.files.is_empty() {
        return Err(IngestError::EmptyManifest);
    }
    std::fs::create_dir_all(cache_dir)
        .map_err(|source| IngestError::Io { path: cache_dir.into(), source })?;

    let mut files = manifest.files.clone();
    files.sort_by_key(|f| f.year);

    let mut losses = Vec::new();
    let mut skipped = 0usize;
    for file in &files {
        let path = cache_dir.join(&file.filename);
        if !path.exists() {
            if offline {
                return Err(IngestError::MissingCache(path));
            }
            let url = format!("{}{}", manifest.base_url, file.filename);
            let bytes = http_get_bytes(&url)?;
            let mut f = std::fs::File::create(&path)
                .map_err(|source| IngestError::Io { path: path.clone(), source })?;
            f.write_all(&bytes)
                .map_err(|source| IngestError::Io { path: path.clone(), source })?;
        }
        let (mut file_losses, file_skipped) = parse_noaa_file(&path)?;
        losses.append(&mut file_losses);
        skipped += file_skipped;
    }
    if losses.is_empty() {
        return Err(IngestError::EmptyDataset);
    }
    Ok(LossDataset {
        record_count: losses.len(),
        losses,
        source: DataSource::Noaa,
        skipped_records: skipped,
        provenance: format!(
            "noaa(base_url={}, files={}, retrieved={})",
            manifest.base_url,
            files.len(),
            manifest.retrieved_date
        ),
    })
}

/// Minimum property damage kept in the dataset, in dollars.
pub const DAMAGE_FLOOR: f64 = 1000.0;

fn parse_noaa_file(path: &Path) -> Result<(Vec<f64>, usize), IngestError> {
    let file = std::fs::File::open(path)
        .map_err(|source| IngestError::Io { path: path.into(), source })?;
    let gz = flate2::read::GzDecoder::new(file);
    parse_noaa_csv(gz, path)
}

fn parse_noaa_csv<R: Read>(reader: R, path: &Path) -> Result<(Vec<f64>, usize), IngestError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers =
        rdr.headers().map_err(|source| IngestError::Csv { path: path.into(), source })?;
    let damage_idx = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case("DAMAGE_PROPERTY"))
        .ok_or_else(|| IngestError::MissingColumn("DAMAGE_PROPERTY".into()))?;

    let mut losses = Vec::new();
    let mut skipped = 0usize;
    for record in rdr.records() {
        let record = record.map_err(|source| IngestError::Csv { path: path.into(), source })?;
        let field = record.get(damage_idx).unwrap_or("");
        match parse_damage(field) {
            Ok(Some(v)) if v >= DAMAGE_FLOOR => losses.push(v),
            Ok(_) => {}
            Err(_) => skipped += 1,
        }
    }
    Ok((losses, skipped))
}
