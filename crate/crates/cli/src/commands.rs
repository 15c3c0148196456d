//! The two experiment commands and their exit-code mapping.

use crate::output::{
    cdf_csv, pl_map_csv, sweep_csv, to_json_pretty, write_atomic, SimulateSummary,
    SweepCaseSummary, SweepSummary,
};
use crate::scenario::{load_scenario_file, ScenarioError};
use clap::{Args, ValueEnum};
use riscope_core::engine::{height_sweep_with_maps, sweep_grid, CoverageMap, EngineError};
use riscope_core::metrics::{cdf_stats, CdfStats, MetricsError};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit code: 1 usage or I/O, 2 invalid scenario, 3 model range.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(_) => 2,
            // An all-masked or empty map is a scenario pathology, not a
            // model-range violation.
            CliError::Engine(EngineError::Metrics(_)) | CliError::Metrics(_) => 2,
            CliError::Engine(_) => 3,
            CliError::Io { .. } | CliError::Usage(_) => 1,
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RisFlag {
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario file to load.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Whether reflective panels contribute paths.
    #[arg(long, value_enum)]
    pub ris: RisFlag,
    /// Worker threads; defaults to one per CPU. Affects wall time only,
    /// never output bytes.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct HeightSweepArgs {
    /// Scenario file to load.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Panel height offsets below the mast top, meters.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0,10,20,30",
        allow_negative_numbers = true
    )]
    pub offsets: Vec<f64>,
    /// Worker threads; defaults to one per CPU. Affects wall time only,
    /// never output bytes.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the default
/// pool when no count was given.
fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--workers must be at least 1".to_string())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot build a {n}-thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn write_map_files(dir: &Path, map: &CoverageMap, stats: &CdfStats) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(io_err(format!("create {}", dir.display())))?;
    let pl_path = dir.join("pl_map.csv");
    write_atomic(&pl_path, pl_map_csv(map).as_bytes())
        .map_err(io_err(format!("write {}", pl_path.display())))?;
    let cdf_path = dir.join("cdf.csv");
    write_atomic(&cdf_path, cdf_csv(stats).as_bytes())
        .map_err(io_err(format!("write {}", cdf_path.display())))?;
    Ok(())
}

/// Single coverage sweep: writes pl_map.csv, cdf.csv, and summary.json into
/// the output directory.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let file = load_scenario_file(&args.scenario)?;
    let scene = file.to_scene()?;
    let ris_enabled = args.ris == RisFlag::On;
    let map = with_pool(args.workers, || sweep_grid(&scene, ris_enabled))??;
    let stats = cdf_stats(&map)?;

    write_map_files(&args.out_dir, &map, &stats)?;
    let summary = SimulateSummary {
        scenario: file.meta.name.clone(),
        ris_enabled,
        grid: (&scene.grid).into(),
        evaluated_points: stats.count,
        masked_points: map.masked_count(),
        clamped_evaluations: map.clamped_evaluations,
        mean_pl_db: stats.mean_db,
        std_pl_db: stats.std_db,
    };
    let path = args.out_dir.join("summary.json");
    write_atomic(&path, to_json_pretty(&summary).as_bytes())
        .map_err(io_err(format!("write {}", path.display())))?;
    Ok(())
}

/// Panel height sweep: writes sweep.csv and sweep_summary.json, plus
/// pl_map.csv and cdf.csv for the baseline and for every offset case.
pub fn cmd_height_sweep(args: &HeightSweepArgs) -> Result<(), CliError> {
    if args.offsets.is_empty() {
        return Err(CliError::Usage("--offsets needs at least one value".to_string()));
    }
    let file = load_scenario_file(&args.scenario)?;
    let scene = file.to_scene()?;
    let (report, maps) = with_pool(args.workers, || height_sweep_with_maps(&scene, &args.offsets))??;

    std::fs::create_dir_all(&args.out_dir)
        .map_err(io_err(format!("create {}", args.out_dir.display())))?;
    let sweep_path = args.out_dir.join("sweep.csv");
    write_atomic(&sweep_path, sweep_csv(&report).as_bytes())
        .map_err(io_err(format!("write {}", sweep_path.display())))?;

    write_map_files(&args.out_dir.join("baseline"), &maps.baseline, &report.baseline)?;
    for ((case, map), row) in maps.cases.iter().zip(&report.rows) {
        let dir = args.out_dir.join(format!("offset_{}", case.offset_m));
        write_map_files(&dir, map, &row.stats)?;
    }

    let summary = SweepSummary {
        scenario: file.meta.name.clone(),
        bs_height_m: scene.bs_height_m,
        offsets_m: args.offsets.clone(),
        std_convention: "population",
        baseline_mean_pl_db: report.baseline.mean_db,
        baseline_std_pl_db: report.baseline.std_db,
        evaluated_points: report.baseline.count,
        cases: report
            .rows
            .iter()
            .map(|row| SweepCaseSummary {
                offset_m: row.offset_m,
                ris_height_m: row.ris_height_m,
                delta_pl_pct: row.delta_pl_pct,
                delta_pl_linear_pct: row.delta_pl_linear_pct,
                mean_pl_db: row.stats.mean_db,
                std_pl_db: row.stats.std_db,
            })
            .collect(),
    };
    let path = args.out_dir.join("sweep_summary.json");
    write_atomic(&path, to_json_pretty(&summary).as_bytes())
        .map_err(io_err(format!("write {}", path.display())))?;
    Ok(())
}
