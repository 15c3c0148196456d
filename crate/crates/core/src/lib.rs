//! Deterministic urban radio-coverage engine.
//!
//! Models a city block scene (buildings, macro cells, wall-mounted
//! reflective panels) and computes the per-point minimum path loss over the
//! direct macro-cell channel and far-field beamforming reflections, plus the
//! aggregate improvement metrics of panel height sweeps.
//!
//! Results are bit-reproducible: evaluation order, reduction order, and
//! tie-breaks are all fixed, independent of thread count.

pub mod engine;
pub mod geometry;
pub mod metrics;
pub mod propagation;
pub mod ris;
pub mod scene;

pub use engine::{
    apply_height_case, evaluate_point, height_sweep, height_sweep_with_maps, sweep_grid,
    CoverageMap, EngineError, HeightCase, HeightSweepMaps, PathCandidate, PathKind,
    PointEvaluation,
};
pub use geometry::Point3;
pub use metrics::{cdf_stats, delta_pl_mean, delta_pl_mean_linear, CdfStats, MetricsError, SweepReport, SweepRow};
pub use propagation::{
    direct_path_loss, received_power_dbm, uma_breakpoint_distance, uma_los_pl, uma_nlos_pl,
    DirectPathLoss, ModelRangeError, SPEED_OF_LIGHT_M_S,
};
pub use ris::{element_pattern, ris_ffbc_pl, ris_ffbc_pl_with_gain, unit_cell_gain, RisPathLoss};
pub use scene::{
    grid_point_position, ris_angles, Building, CellConfig, GridSpec, Margins, RisGeometry, RisLeg,
    RisOptions, RisPanel, Scene, SceneError,
};
