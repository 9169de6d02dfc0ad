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

//! Command-line driver: run experiments, ingest data, project resources.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 4 threshold
//! violation under `run --check`.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tailqae::harness::{
    check_report, run_experiment, write_report, ConfigOverrides, DatasetKind, ExperimentConfig,
    ExperimentId, HarnessError,
};
use tailqae::ingest::{generate_pareto, load_noaa, LossDataset, Manifest};

#[derive(Parser)]
#[command(name = "tailqae", version, about = "Quantum amplitude estimation for catastrophe tail-risk pricing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write report.csv, summary, and plot data.
    Run(RunArgs),
    /// Acquire loss data.
    Ingest(IngestArgs),
    /// Project wall-clock speedup for a hypothetical production deployment.
    ProjectResources(ProjectArgs),
}

#[derive(Args)]
struct RunArgs {
    /// One of exp1..exp7 (exp4a/exp4b), or `binning`.
    experiment: String,
    /// Override the experiment's default dataset.
    #[arg(long)]
    dataset: Option<String>,
    /// Cut repetitions to 10 and cap the qubit sweep at n = 6.
    #[arg(long)]
    fast: bool,
    /// Master seed for all derived random streams.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// NOAA cache directory (manifest + csv.gz files).
    #[arg(long, default_value = "data/cache")]
    cache: PathBuf,
    /// Never touch the network; fail if the cache is cold.
    #[arg(long)]
    offline: bool,
    /// Verify the report against its thresholds; exit 4 on violation.
    #[arg(long)]
    check: bool,
    /// JSON config file overriding experiment defaults (CLI flags win).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    #[command(subcommand)]
    source: IngestSource,
}

#[derive(Subcommand)]
enum IngestSource {
    /// Download (or reuse) the pinned NOAA Storm Events snapshot.
    Noaa {
        #[arg(long, default_value = "data/cache")]
        cache: PathBuf,
        #[arg(long)]
        offline: bool,
        /// Export the filtered losses, one dollar amount per line.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Generate Pareto-distributed synthetic losses.
    Synthetic {
        #[arg(long, default_value_t = 20_000)]
        count: usize,
        #[arg(long, default_value_t = 1.5)]
        alpha: f64,
        #[arg(long, default_value_t = 50_000.0)]
        scale: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ProjectArgs {
    /// Classical simulation budget (number of runs).
    #[arg(long)]
    classical_n: f64,
    /// Seconds per classical simulation run.
    #[arg(long)]
    classical_cost: f64,
    /// Transpiled circuit depth of the full amplified oracle.
    #[arg(long)]
    depth: f64,
    /// Seconds per gate layer.
    #[arg(long)]
    gate_time: f64,
}

enum CliError {
    Config(String),
    Data(String),
    Check(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Check(_) => 4,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) => CliError::Config(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<tailqae::ingest::IngestError> for CliError {
    fn from(e: tailqae::ingest::IngestError) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Config(msg) => eprintln!("configuration error: {msg}"),
                CliError::Data(msg) => eprintln!("data error: {msg}"),
                CliError::Check(n) => eprintln!("{n} threshold check(s) failed"),
            }
            ExitCode::from(e.code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => run_command(args),
        Command::Ingest(args) => ingest_command(args),
        Command::ProjectResources(args) => project_command(args),
    }
}

fn run_command(args: RunArgs) -> Result<(), CliError> {
    let experiment: ExperimentId =
        args.experiment.parse().map_err(|e: HarnessError| CliError::Config(e.to_string()))?;
    let mut config = ExperimentConfig::defaults(experiment, args.fast, args.seed);

    if let Some(path) = &args.config {
        let body = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let overrides: ConfigOverrides = serde_json::from_str(&body)
            .map_err(|e| CliError::Config(format!("bad config file: {e}")))?;
        config.apply_overrides(&overrides);
    }
    // CLI flags win over the config file.
    config.master_seed = args.seed;
    if let Some(ds) = &args.dataset {
        config.dataset =
            ds.parse().map_err(|e: HarnessError| CliError::Config(e.to_string()))?;
    }

    let data = load_dataset(config.dataset, &args.cache, args.offline, config.master_seed)?;
    eprintln!(
        "running {} on {} ({} records, {} reps)",
        experiment, config.dataset, data.record_count, config.repetitions
    );
    let report = run_experiment(&config, &data)?;
    let dir = write_report(&report, &args.out)?;
    println!("report written to {}", dir.display());

    if args.check {
        let failures = check_report(&report);
        for f in &failures {
            eprintln!("FAIL {f}");
        }
        if !failures.is_empty() {
            return Err(CliError::Check(failures.len()));
        }
        println!("all threshold checks passed");
    }
    Ok(())
}

fn load_dataset(
    dataset: DatasetKind,
    cache: &PathBuf,
    offline: bool,
    seed: u64,
) -> Result<LossDataset, CliError> {
    match dataset {
        DatasetKind::Synthetic => Ok(generate_pareto(20_000, 1.5, 50_000.0, seed)?),
        DatasetKind::Noaa => {
            let manifest = match Manifest::load(cache) {
                Ok(m) => m,
                Err(_) if !offline => {
                    let m = Manifest::pinned_snapshot();
                    std::fs::create_dir_all(cache)
                        .map_err(|e| CliError::Data(format!("cannot create cache: {e}")))?;
                    m.save(cache)?;
                    m
                }
                Err(e) => return Err(CliError::Data(format!("no manifest in cache: {e}"))),
            };
            Ok(load_noaa(&manifest, cache, offline)?)
        }
    }
}

fn ingest_command(args: IngestArgs) -> Result<(), CliError> {
    match args.source {
        IngestSource::Noaa { cache, offline, export } => {
            let data = load_dataset(DatasetKind::Noaa, &cache, offline, 0)?;
            println!(
                "noaa: {} records kept (>= $1,000 property damage), {} skipped",
                data.record_count, data.skipped_records
            );
            if let Some(path) = export {
                data.export(&path)?;
                println!("losses exported to {}", path.display());
            }
            Ok(())
        }
        IngestSource::Synthetic { count, alpha, scale, seed, export } => {
            let data = generate_pareto(count, alpha, scale, seed)?;
            println!("synthetic: {} Pareto records (alpha={alpha}, scale={scale}, seed={seed})", data.record_count);
            if let Some(path) = export {
                data.export(&path)?;
                println!("losses exported to {}", path.display());
            }
            Ok(())
        }
    }
}

fn project_command(args: ProjectArgs) -> Result<(), CliError> {
    if args.classical_n <= 0.0
        || args.classical_cost <= 0.0
        || args.depth <= 0.0
        || args.gate_time <= 0.0
    {
        return Err(CliError::Config("all projection inputs must be positive".into()));
    }
    let p = tailqae::harness::resource_projection(
        args.classical_n,
        args.classical_cost,
        args.depth,
        args.gate_time,
    );
    for caveat in &p.caveats {
        println!("# {caveat}");
    }
    println!("classical: {} runs x {} s = {:.1} s", p.classical_runs, p.classical_cost_s, p.classical_wall_s);
    println!(
        "quantum:   {:.1} oracle calls x ({} depth x {} s) = {:.2} s",
        p.quantum_queries, p.oracle_depth, p.gate_time_s, p.quantum_wall_s
    );
    println!("projected wall-clock ratio: {:.1}x", p.speedup_ratio);
    Ok(())
}
