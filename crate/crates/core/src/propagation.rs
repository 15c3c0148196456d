//! Direct-path macro-cell path loss and the received-power budget.
//!
//! The LOS model is dual-slope in 3D distance with a breakpoint set by the
//! antenna heights and carrier; the NLOS model is the maximum of the LOS
//! value and a steeper urban term. Both are deterministic: no shadowing draw
//! is added here, large-scale margins enter only through the link budget.
//!
//! Validity limits: endpoint heights must exceed 1 m and the 2D distance may
//! not exceed 5 km. Distances under 10 m are clamped up to 10 m; callers
//! that need to count clamped evaluations read the flag on
//! [`DirectPathLoss`].

use crate::geometry::Point3;
use crate::scene::CellConfig;
use thiserror::Error;

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Model validity floor for the 2D transmitter-receiver distance, meters.
pub const MIN_DISTANCE_2D_M: f64 = 10.0;
/// Model validity ceiling for the 2D transmitter-receiver distance, meters.
pub const MAX_DISTANCE_2D_M: f64 = 5_000.0;

#[derive(Debug, Error, PartialEq)]
pub enum ModelRangeError {
    #[error("endpoint height {height_m} m is at or below the 1 m model floor")]
    HeightTooLow { height_m: f64 },
    #[error("2D distance {distance_m} m exceeds the {MAX_DISTANCE_2D_M} m model ceiling")]
    DistanceTooLarge { distance_m: f64 },
    #[error("carrier frequency {frequency_hz} Hz must be positive and finite")]
    InvalidFrequency { frequency_hz: f64 },
}

fn check_inputs(h_bs_m: f64, h_ut_m: f64, frequency_hz: f64) -> Result<(), ModelRangeError> {
    if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
        return Err(ModelRangeError::InvalidFrequency { frequency_hz });
    }
    for h in [h_bs_m, h_ut_m] {
        if !(h.is_finite() && h > 1.0) {
            return Err(ModelRangeError::HeightTooLow { height_m: h });
        }
    }
    Ok(())
}

/// Breakpoint distance of the dual-slope LOS model, meters.
///
/// Both effective antenna heights are the physical heights less 1 m of
/// assumed street clutter.
pub fn uma_breakpoint_distance(h_bs_m: f64, h_ut_m: f64, frequency_hz: f64) -> f64 {
    assert!(h_bs_m > 1.0 && h_ut_m > 1.0 && frequency_hz > 0.0, "inputs outside model range");
    4.0 * (h_bs_m - 1.0) * (h_ut_m - 1.0) * frequency_hz / SPEED_OF_LIGHT_M_S
}

/// Both slopes of the LOS model evaluated at one geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosBranches {
    /// Near-in slope (22 dB/decade), valid up to the breakpoint.
    pub below_db: f64,
    /// Far slope (40 dB/decade) with the breakpoint correction.
    pub above_db: f64,
    pub breakpoint_m: f64,
}

fn clamp_d2d(d2d_m: f64) -> Result<f64, ModelRangeError> {
    if !(d2d_m.is_finite() && d2d_m <= MAX_DISTANCE_2D_M) {
        return Err(ModelRangeError::DistanceTooLarge { distance_m: d2d_m });
    }
    Ok(d2d_m.max(MIN_DISTANCE_2D_M))
}

/// Evaluates both LOS slopes at the (clamped) 2D distance. The two agree at
/// the breakpoint by construction.
pub fn uma_los_branches(
    d2d_m: f64,
    h_bs_m: f64,
    h_ut_m: f64,
    frequency_hz: f64,
) -> Result<LosBranches, ModelRangeError> {
    check_inputs(h_bs_m, h_ut_m, frequency_hz)?;
    let d2d = clamp_d2d(d2d_m)?;
    let dh = h_bs_m - h_ut_m;
    let d3d = (d2d * d2d + dh * dh).sqrt();
    let f_ghz = frequency_hz / 1e9;
    let d_bp = uma_breakpoint_distance(h_bs_m, h_ut_m, frequency_hz);
    let below = 28.0 + 22.0 * d3d.log10() + 20.0 * f_ghz.log10();
    let above = 28.0 + 40.0 * d3d.log10() + 20.0 * f_ghz.log10()
        - 9.0 * (d_bp * d_bp + dh * dh).log10();
    Ok(LosBranches {
        below_db: below,
        above_db: above,
        breakpoint_m: d_bp,
    })
}

/// LOS path loss in dB at 2D distance `d2d_m` between antennas at heights
/// `h_bs_m` and `h_ut_m`.
pub fn uma_los_pl(
    d2d_m: f64,
    h_bs_m: f64,
    h_ut_m: f64,
    frequency_hz: f64,
) -> Result<f64, ModelRangeError> {
    let b = uma_los_branches(d2d_m, h_bs_m, h_ut_m, frequency_hz)?;
    let d2d = clamp_d2d(d2d_m)?;
    Ok(if d2d <= b.breakpoint_m { b.below_db } else { b.above_db })
}

/// NLOS path loss in dB: the maximum of the LOS value and the steeper urban
/// term, so NLOS never undercuts LOS.
///
/// The receiver-height correction term uses the height clamped into
/// [1.5, 22.5] m; the LOS component uses the true height.
pub fn uma_nlos_pl(
    d2d_m: f64,
    h_bs_m: f64,
    h_ut_m: f64,
    frequency_hz: f64,
) -> Result<f64, ModelRangeError> {
    let los = uma_los_pl(d2d_m, h_bs_m, h_ut_m, frequency_hz)?;
    let d2d = clamp_d2d(d2d_m)?;
    let dh = h_bs_m - h_ut_m;
    let d3d = (d2d * d2d + dh * dh).sqrt();
    let f_ghz = frequency_hz / 1e9;
    let h_corr = h_ut_m.clamp(1.5, 22.5);
    let nlos = 13.54 + 39.08 * d3d.log10() + 20.0 * f_ghz.log10() - 0.6 * (h_corr - 1.5);
    Ok(los.max(nlos))
}

/// Direct-path evaluation between a cell site and a receiver position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectPathLoss {
    pub los_db: f64,
    pub nlos_db: f64,
    /// Effective 2D distance after the 10 m floor, meters.
    pub distance_2d_m: f64,
    pub distance_3d_m: f64,
    /// True when the raw 2D distance was under the floor and got clamped.
    pub clamped: bool,
}

/// Evaluates both direct-path losses for the site-to-receiver geometry.
/// Antenna heights are the z coordinates of the two points.
pub fn direct_path_loss(
    site: &Point3,
    rx: &Point3,
    frequency_hz: f64,
) -> Result<DirectPathLoss, ModelRangeError> {
    let dx = rx.x - site.x;
    let dy = rx.y - site.y;
    let d2d_raw = (dx * dx + dy * dy).sqrt();
    let clamped = d2d_raw < MIN_DISTANCE_2D_M;
    let los_db = uma_los_pl(d2d_raw, site.z, rx.z, frequency_hz)?;
    let nlos_db = uma_nlos_pl(d2d_raw, site.z, rx.z, frequency_hz)?;
    let d2d = clamp_d2d(d2d_raw)?;
    let dh = site.z - rx.z;
    Ok(DirectPathLoss {
        los_db,
        nlos_db,
        distance_2d_m: d2d,
        distance_3d_m: (d2d * d2d + dh * dh).sqrt(),
        clamped,
    })
}

/// Received power in dBm for a given path loss, from the cell's link budget.
/// With `apply_margins` the planning margins are subtracted as well.
pub fn received_power_dbm(cell: &CellConfig, pl_db: f64, apply_margins: bool) -> f64 {
    let mut p = cell.tx_power_dbm + cell.antenna_gain_dbi - cell.feeder_loss_db - pl_db;
    if apply_margins {
        p -= cell.margins.total_db();
    }
    p
}
