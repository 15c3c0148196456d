//! Coverage-sweep engine: per-point path candidates, minimum-loss selection,
//! whole-grid sweeps, and panel height sweeps.
//!
//! Every receiver point collects one direct candidate per cell (LOS when the
//! sightline is clear, otherwise NLOS) plus one reflected candidate per
//! visible (cell, panel) pair, and keeps the minimum-loss candidate under a
//! total order, so results never depend on evaluation order or worker count.

use crate::geometry::Point3;
use crate::metrics::{cdf_stats, delta_pl_mean, delta_pl_mean_linear, MetricsError, SweepReport, SweepRow};
use crate::propagation::{direct_path_loss, ModelRangeError, SPEED_OF_LIGHT_M_S};
use crate::ris::{ris_ffbc_pl_with_gain, unit_cell_gain};
use crate::scene::{grid_point_position, GridSpec, RisGeometry, RisLeg, Scene};
use rayon::prelude::*;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("grid point ({ix}, {iy}), cell {cell_id}: {source}")]
    Sweep {
        ix: u32,
        iy: u32,
        cell_id: u32,
        source: ModelRangeError,
    },
    #[error("height offset {offset_m} m leaves no positive panel height under a {bs_height_m} m mast")]
    InvalidHeightCase { offset_m: f64, bs_height_m: f64 },
    #[error("height sweep needs at least one offset")]
    NoOffsets,
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// How a candidate reaches the receiver. Declaration order is the tie-break
/// order for equal losses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PathKind {
    DirectLos,
    DirectNlos,
    RisReflected,
}

impl PathKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PathKind::DirectLos => "direct_los",
            PathKind::DirectNlos => "direct_nlos",
            PathKind::RisReflected => "ris_reflected",
        }
    }
}

/// One candidate path to a receiver point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathCandidate {
    pub kind: PathKind,
    pub cell_id: u32,
    /// Panel id for reflected candidates, `None` for direct ones.
    pub ris_id: Option<u32>,
    pub pl_db: f64,
}

impl PathCandidate {
    /// Total order used for minimum selection: loss first, then kind, cell
    /// id, and panel id. Total over finite and non-finite losses alike, so
    /// the winner never depends on candidate order.
    pub fn selection_cmp(&self, other: &Self) -> Ordering {
        self.pl_db
            .total_cmp(&other.pl_db)
            .then(self.kind.cmp(&other.kind))
            .then(self.cell_id.cmp(&other.cell_id))
            .then(self.ris_id.cmp(&other.ris_id))
    }
}

/// Everything evaluated at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointEvaluation {
    /// All candidates in canonical order: direct per cell (cell order), then
    /// reflected per (panel, cell) pair. Empty for masked points.
    pub candidates: Vec<PathCandidate>,
    /// Minimum-loss candidate; `None` only for masked points.
    pub best: Option<PathCandidate>,
    /// True when the point lies inside a building and was not evaluated.
    pub masked: bool,
    /// Direct evaluations whose 2D distance hit the model floor.
    pub clamped_evaluations: u32,
}

/// Minimum path loss over a full receiver grid, row-major `iy * nx + ix`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageMap {
    pub grid: GridSpec,
    pub ris_enabled: bool,
    /// Minimum loss per point; `None` marks masked (in-building) points.
    pub pl_min_db: Vec<Option<f64>>,
    pub winner: Vec<Option<PathCandidate>>,
    pub clamped_evaluations: u64,
}

impl CoverageMap {
    pub fn index(&self, ix: u32, iy: u32) -> usize {
        debug_assert!(ix < self.grid.nx && iy < self.grid.ny);
        iy as usize * self.grid.nx as usize + ix as usize
    }

    pub fn masked_count(&self) -> usize {
        self.pl_min_db.iter().filter(|v| v.is_none()).count()
    }
}

/// Precomputed transmitter-side state for one (cell, panel) pair.
struct PanelLink {
    bs_visible: bool,
    leg_t: RisLeg,
    /// Unit-cell gain at this cell's carrier, after any scene override.
    gain: f64,
    wavelength_m: f64,
}

/// Immutable per-sweep state: deduplicated cell sites and per-(cell, panel)
/// transmitter legs, shared across all grid points.
struct SweepContext<'s> {
    scene: &'s Scene,
    ris_enabled: bool,
    /// Unique site positions and, per cell, the index of its site.
    sites: Vec<Point3>,
    cell_site: Vec<usize>,
    /// `links[cell_index][panel_index]`; empty when reflections are off.
    links: Vec<Vec<PanelLink>>,
}

impl<'s> SweepContext<'s> {
    fn new(scene: &'s Scene, ris_enabled: bool) -> Self {
        let mut sites: Vec<Point3> = Vec::new();
        let cell_site = scene
            .cells
            .iter()
            .map(|cell| {
                if let Some(i) = sites.iter().position(|s| *s == cell.site) {
                    i
                } else {
                    sites.push(cell.site);
                    sites.len() - 1
                }
            })
            .collect();
        let links = if ris_enabled {
            scene
                .cells
                .iter()
                .map(|cell| {
                    let lambda = SPEED_OF_LIGHT_M_S / cell.frequency_hz;
                    scene
                        .ris_panels
                        .iter()
                        .map(|panel| PanelLink {
                            bs_visible: scene.los_visible(&cell.site, &panel.center),
                            leg_t: panel.leg(&cell.site),
                            gain: scene.ris_options.unit_cell_gain_override.unwrap_or_else(|| {
                                unit_cell_gain(panel.spacing_dm_m, panel.spacing_dn_m, lambda)
                            }),
                            wavelength_m: lambda,
                        })
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        Self {
            scene,
            ris_enabled,
            sites,
            cell_site,
            links,
        }
    }

    fn evaluate(&self, ix: u32, iy: u32) -> Result<PointEvaluation, EngineError> {
        let p = grid_point_position(&self.scene.grid, ix, iy);
        if self.scene.point_in_building(&p) {
            return Ok(PointEvaluation {
                candidates: Vec::new(),
                best: None,
                masked: true,
                clamped_evaluations: 0,
            });
        }

        let site_visible: Vec<bool> = self
            .sites
            .iter()
            .map(|s| self.scene.los_visible(s, &p))
            .collect();

        let mut candidates = Vec::new();
        let mut clamped = 0u32;
        for (ci, cell) in self.scene.cells.iter().enumerate() {
            let dpl = direct_path_loss(&cell.site, &p, cell.frequency_hz).map_err(|source| {
                EngineError::Sweep {
                    ix,
                    iy,
                    cell_id: cell.id,
                    source,
                }
            })?;
            if dpl.clamped {
                clamped += 1;
            }
            let (kind, pl_db) = if site_visible[self.cell_site[ci]] {
                (PathKind::DirectLos, dpl.los_db)
            } else {
                (PathKind::DirectNlos, dpl.nlos_db)
            };
            candidates.push(PathCandidate {
                kind,
                cell_id: cell.id,
                ris_id: None,
                pl_db,
            });
        }

        if self.ris_enabled {
            for (pi, panel) in self.scene.ris_panels.iter().enumerate() {
                if !self.scene.los_visible(&panel.center, &p) {
                    continue;
                }
                let leg_r = panel.leg(&p);
                for (ci, cell) in self.scene.cells.iter().enumerate() {
                    let link = &self.links[ci][pi];
                    if !link.bs_visible {
                        continue;
                    }
                    let geom = RisGeometry {
                        theta_t_rad: link.leg_t.angle_rad,
                        theta_r_rad: leg_r.angle_rad,
                        d1_m: link.leg_t.distance_m,
                        d2_m: leg_r.distance_m,
                    };
                    if let Some(pl) = ris_ffbc_pl_with_gain(
                        panel,
                        &geom,
                        cell.antenna_gain_dbi,
                        self.scene.ris_options.ris_rx_gain_dbi,
                        link.wavelength_m,
                        link.gain,
                    ) {
                        candidates.push(PathCandidate {
                            kind: PathKind::RisReflected,
                            cell_id: cell.id,
                            ris_id: Some(panel.id),
                            pl_db: pl.pl_db,
                        });
                    }
                }
            }
        }

        let best = candidates
            .iter()
            .copied()
            .min_by(|a, b| a.selection_cmp(b));
        Ok(PointEvaluation {
            candidates,
            best,
            masked: false,
            clamped_evaluations: clamped,
        })
    }
}

/// Evaluates a single grid point. Convenience entry point; a full sweep via
/// [`sweep_grid`] produces bit-identical values.
pub fn evaluate_point(
    scene: &Scene,
    ix: u32,
    iy: u32,
    ris_enabled: bool,
) -> Result<PointEvaluation, EngineError> {
    SweepContext::new(scene, ris_enabled).evaluate(ix, iy)
}

/// Sweeps the whole grid. Points are evaluated in parallel; the result is
/// assembled in index order, so the map is identical for any worker count.
pub fn sweep_grid(scene: &Scene, ris_enabled: bool) -> Result<CoverageMap, EngineError> {
    let ctx = SweepContext::new(scene, ris_enabled);
    let nx = scene.grid.nx;
    let n = scene.grid.point_count();
    let results: Vec<Result<PointEvaluation, EngineError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ix = (i % nx as usize) as u32;
            let iy = (i / nx as usize) as u32;
            ctx.evaluate(ix, iy)
        })
        .collect();

    let mut pl_min_db = Vec::with_capacity(n);
    let mut winner = Vec::with_capacity(n);
    let mut clamped: u64 = 0;
    for result in results {
        let eval = result?;
        clamped += u64::from(eval.clamped_evaluations);
        pl_min_db.push(eval.best.map(|c| c.pl_db));
        winner.push(eval.best);
    }
    Ok(CoverageMap {
        grid: scene.grid,
        ris_enabled,
        pl_min_db,
        winner,
        clamped_evaluations: clamped,
    })
}

/// One panel-height configuration: panels hang `offset_m` below the mast
/// top, at `ris_height_m` above ground.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightCase {
    pub offset_m: f64,
    pub ris_height_m: f64,
}

impl HeightCase {
    pub fn from_offset(offset_m: f64, bs_height_m: f64) -> Result<Self, EngineError> {
        let ris_height_m = bs_height_m - offset_m;
        if !(offset_m.is_finite() && offset_m >= 0.0 && ris_height_m > 0.0) {
            return Err(EngineError::InvalidHeightCase {
                offset_m,
                bs_height_m,
            });
        }
        Ok(Self {
            offset_m,
            ris_height_m,
        })
    }
}

/// Returns a copy of the scene with every panel center moved to the case's
/// height. Horizontal positions and normals are untouched.
pub fn apply_height_case(scene: &Scene, case: &HeightCase) -> Scene {
    let mut adjusted = scene.clone();
    for panel in &mut adjusted.ris_panels {
        panel.center.z = case.ris_height_m;
    }
    adjusted
}

/// Full sweep output for one height sweep: the reflection-off baseline plus
/// one map per offset.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightSweepMaps {
    pub baseline: CoverageMap,
    pub cases: Vec<(HeightCase, CoverageMap)>,
}

/// Runs the baseline sweep and one reflection-on sweep per offset, keeping
/// the coverage maps alongside the aggregate report.
pub fn height_sweep_with_maps(
    scene: &Scene,
    offsets: &[f64],
) -> Result<(SweepReport, HeightSweepMaps), EngineError> {
    if offsets.is_empty() {
        return Err(EngineError::NoOffsets);
    }
    let baseline = sweep_grid(scene, false)?;
    let baseline_stats = cdf_stats(&baseline)?;
    let mut rows = Vec::with_capacity(offsets.len());
    let mut cases = Vec::with_capacity(offsets.len());
    for &offset_m in offsets {
        let case = HeightCase::from_offset(offset_m, scene.bs_height_m)?;
        let adjusted = apply_height_case(scene, &case);
        let map = sweep_grid(&adjusted, true)?;
        rows.push(SweepRow {
            offset_m,
            ris_height_m: case.ris_height_m,
            delta_pl_pct: delta_pl_mean(&baseline, &map)?,
            delta_pl_linear_pct: delta_pl_mean_linear(&baseline, &map)?,
            stats: cdf_stats(&map)?,
        });
        cases.push((case, map));
    }
    Ok((
        SweepReport {
            baseline: baseline_stats,
            rows,
        },
        HeightSweepMaps { baseline, cases },
    ))
}

/// Aggregate-only variant of [`height_sweep_with_maps`].
pub fn height_sweep(scene: &Scene, offsets: &[f64]) -> Result<SweepReport, EngineError> {
    height_sweep_with_maps(scene, offsets).map(|(report, _)| report)
}
