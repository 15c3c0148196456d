//! Output writers. All files are rendered fully in memory and land via
//! write-then-rename, so readers never observe a partial file. Floats are
//! formatted with the shortest round-trip representation, which keeps the
//! outputs byte-stable for identical inputs.

use riscope_core::engine::CoverageMap;
use riscope_core::metrics::{CdfStats, SweepReport};
use riscope_core::scene::grid_point_position;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

/// Writes `bytes` to `path` atomically (temp file in the same directory,
/// then rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp = path.to_path_buf();
    let name = tmp
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    tmp.set_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

/// Renders the per-point minimum path loss map. One row per unmasked grid
/// point in row-major order; `ris_id` is empty for direct winners.
pub fn pl_map_csv(map: &CoverageMap) -> String {
    let mut out = String::from("x,y,easting_m,northing_m,pl_min_db,winner_kind,cell_id,ris_id\n");
    for iy in 0..map.grid.ny {
        for ix in 0..map.grid.nx {
            let Some(winner) = &map.winner[map.index(ix, iy)] else {
                continue;
            };
            let p = grid_point_position(&map.grid, ix, iy);
            let ris_id = winner.ris_id.map(|id| id.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{ix},{iy},{},{},{},{},{},{ris_id}",
                p.x,
                p.y,
                winner.pl_db,
                winner.kind.as_str(),
                winner.cell_id
            )
            .expect("string write cannot fail");
        }
    }
    out
}

/// Renders the empirical CDF: one row per distinct loss value.
pub fn cdf_csv(stats: &CdfStats) -> String {
    let mut out = String::from("pl_db,cum_prob\n");
    for (pl_db, cum_prob) in &stats.cdf {
        writeln!(out, "{pl_db},{cum_prob}").expect("string write cannot fail");
    }
    out
}

/// Renders the height-sweep table, one row per offset.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("offset_m,ris_height_m,delta_pl_pct,mean_db,std_db\n");
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.offset_m, row.ris_height_m, row.delta_pl_pct, row.stats.mean_db, row.stats.std_db
        )
        .expect("string write cannot fail");
    }
    out
}

#[derive(Serialize)]
pub struct GridEcho {
    pub origin_x_m: f64,
    pub origin_y_m: f64,
    pub cell_size_m: f64,
    pub nx: u32,
    pub ny: u32,
    pub receiver_height_m: f64,
}

impl From<&riscope_core::scene::GridSpec> for GridEcho {
    fn from(g: &riscope_core::scene::GridSpec) -> Self {
        Self {
            origin_x_m: g.origin_x_m,
            origin_y_m: g.origin_y_m,
            cell_size_m: g.cell_size_m,
            nx: g.nx,
            ny: g.ny,
            receiver_height_m: g.receiver_height_m,
        }
    }
}

/// Summary of one coverage run: distribution moments plus a config echo.
#[derive(Serialize)]
pub struct SimulateSummary {
    pub scenario: String,
    pub ris_enabled: bool,
    pub grid: GridEcho,
    pub evaluated_points: usize,
    pub masked_points: usize,
    pub clamped_evaluations: u64,
    pub mean_pl_db: f64,
    /// Population convention (divisor N).
    pub std_pl_db: f64,
}

#[derive(Serialize)]
pub struct SweepCaseSummary {
    pub offset_m: f64,
    pub ris_height_m: f64,
    /// Improvement of summed dB loss over the baseline, percent.
    pub delta_pl_pct: f64,
    /// Same ratio over linear-power losses, for reference.
    pub delta_pl_linear_pct: f64,
    pub mean_pl_db: f64,
    pub std_pl_db: f64,
}

#[derive(Serialize)]
pub struct SweepSummary {
    pub scenario: String,
    pub bs_height_m: f64,
    pub offsets_m: Vec<f64>,
    /// Statistics convention for std_pl_db fields.
    pub std_convention: &'static str,
    pub baseline_mean_pl_db: f64,
    pub baseline_std_pl_db: f64,
    pub evaluated_points: usize,
    pub cases: Vec<SweepCaseSummary>,
}

/// Serializes a summary struct as pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("summary types always serialize");
    s.push('\n');
    s
}
