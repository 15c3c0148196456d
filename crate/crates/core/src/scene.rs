//! Scene model: buildings, base-station cells, reflective panels, and the
//! receiver grid, plus the geometric queries the sweep engine runs against
//! them.
//!
//! A scene is validated once at construction. Fields stay public so tools can
//! assemble and adjust scenes (height sweeps rewrite panel centers), but any
//! mutation is expected to preserve the documented invariants.

use crate::geometry::{
    point_in_polygon_strict, polygon_is_simple, polygon_signed_area, segment_enters_prism, Aabb,
    Point3,
};
use thiserror::Error;

/// Maximum deviation from unit length accepted for a panel normal before the
/// scene is rejected; anything closer is renormalized exactly.
const NORMAL_UNIT_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum SceneError {
    #[error("building {id}: {reason}")]
    InvalidBuilding { id: u32, reason: &'static str },
    #[error("cell {id}: {reason}")]
    InvalidCell { id: u32, reason: &'static str },
    #[error("panel {id}: {reason}")]
    InvalidPanel { id: u32, reason: &'static str },
    #[error("grid: {reason}")]
    InvalidGrid { reason: &'static str },
    #[error("scene: {reason}")]
    InvalidScene { reason: &'static str },
    #[error("duplicate building id {id}")]
    DuplicateBuildingId { id: u32 },
    #[error("duplicate cell id {id}")]
    DuplicateCellId { id: u32 },
    #[error("duplicate panel id {id}")]
    DuplicatePanelId { id: u32 },
}

/// A vertical prism: simple polygonal footprint extruded from z = 0 to
/// `height_m`. The footprint is stored counter-clockwise regardless of input
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct Building {
    id: u32,
    footprint: Vec<[f64; 2]>,
    height_m: f64,
    aabb: Aabb,
}

impl Building {
    pub fn new(id: u32, mut footprint: Vec<[f64; 2]>, height_m: f64) -> Result<Self, SceneError> {
        if footprint.len() < 3 {
            return Err(SceneError::InvalidBuilding {
                id,
                reason: "footprint needs at least 3 vertices",
            });
        }
        if footprint.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            return Err(SceneError::InvalidBuilding {
                id,
                reason: "footprint vertices must be finite",
            });
        }
        if !polygon_is_simple(&footprint) {
            return Err(SceneError::InvalidBuilding {
                id,
                reason: "footprint must be a simple polygon",
            });
        }
        let area = polygon_signed_area(&footprint);
        if area == 0.0 {
            return Err(SceneError::InvalidBuilding {
                id,
                reason: "footprint has zero area",
            });
        }
        if area < 0.0 {
            footprint.reverse();
        }
        if !(height_m.is_finite() && height_m > 0.0) {
            return Err(SceneError::InvalidBuilding {
                id,
                reason: "height must be positive and finite",
            });
        }
        let aabb = Aabb::of_prism(&footprint, height_m);
        Ok(Self {
            id,
            footprint,
            height_m,
            aabb,
        })
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    /// Counter-clockwise footprint vertices.
    pub fn footprint(&self) -> &[[f64; 2]] {
        &self.footprint
    }

    pub fn height_m(&self) -> f64 {
        self.height_m
    }

    pub fn aabb(&self) -> &Aabb {
        &self.aabb
    }

    /// Strict interior test: faces, edges, roof, and ground plane count as
    /// outside.
    pub fn contains_interior(&self, p: &Point3) -> bool {
        p.z > 0.0 && p.z < self.height_m && point_in_polygon_strict([p.x, p.y], &self.footprint)
    }

    /// Does the open segment (a, b) pass through this building's interior?
    pub fn occludes(&self, a: &Point3, b: &Point3) -> bool {
        self.aabb.segment_overlaps(a, b) && segment_enters_prism(a, b, &self.footprint, self.height_m)
    }
}

/// Link-budget margins, all in dB and subtracted from received power when
/// applied.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Margins {
    pub interference_db: f64,
    pub doppler_db: f64,
    pub fading_db: f64,
    pub shadowing_db: f64,
    pub implementation_db: f64,
}

impl Margins {
    pub fn total_db(&self) -> f64 {
        self.interference_db
            + self.doppler_db
            + self.fading_db
            + self.shadowing_db
            + self.implementation_db
    }

    fn all_finite(&self) -> bool {
        self.interference_db.is_finite()
            && self.doppler_db.is_finite()
            && self.fading_db.is_finite()
            && self.shadowing_db.is_finite()
            && self.implementation_db.is_finite()
    }
}

/// One transmitting cell: a carrier at a site position with its radio
/// parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CellConfig {
    pub id: u32,
    /// Antenna position in meters; z is the antenna height above ground.
    pub site: Point3,
    pub frequency_hz: f64,
    pub tx_power_dbm: f64,
    pub antenna_gain_dbi: f64,
    pub feeder_loss_db: f64,
    pub margins: Margins,
}

impl CellConfig {
    fn validate(&self) -> Result<(), SceneError> {
        let fail = |reason| Err(SceneError::InvalidCell { id: self.id, reason });
        if !self.site.is_finite() {
            return fail("site position must be finite");
        }
        if !(self.frequency_hz.is_finite() && self.frequency_hz > 0.0) {
            return fail("frequency must be positive and finite");
        }
        if !self.tx_power_dbm.is_finite() {
            return fail("tx power must be finite");
        }
        if !self.antenna_gain_dbi.is_finite() {
            return fail("antenna gain must be finite");
        }
        if !(self.feeder_loss_db.is_finite() && self.feeder_loss_db >= 0.0) {
            return fail("feeder loss must be non-negative and finite");
        }
        if !self.margins.all_finite() {
            return fail("margins must be finite");
        }
        Ok(())
    }
}

/// A reflective surface: a uniform M x N array of passive elements at a wall,
/// represented by its center and outward unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPanel {
    pub id: u32,
    pub center: Point3,
    /// Outward unit normal; normalized exactly at scene construction.
    pub normal: [f64; 3],
    pub elements_m: u32,
    pub elements_n: u32,
    pub spacing_dm_m: f64,
    pub spacing_dn_m: f64,
    /// Reflection amplitude in (0, 1].
    pub amplitude: f64,
    /// Element pattern exponent: the per-element response is cos(theta)^q on
    /// the front hemisphere and zero behind.
    pub pattern_exponent_q: f64,
}

/// One leg of a reflected path: straight-line distance to the panel center
/// and the angle off the panel normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisLeg {
    pub distance_m: f64,
    pub angle_rad: f64,
}

/// Geometry of a full reflected path: transmitter leg, receiver leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisGeometry {
    pub theta_t_rad: f64,
    pub theta_r_rad: f64,
    pub d1_m: f64,
    pub d2_m: f64,
}

impl RisPanel {
    fn validate_and_normalize(&mut self) -> Result<(), SceneError> {
        let fail = |reason| Err(SceneError::InvalidPanel { id: self.id, reason });
        if !self.center.is_finite() {
            return fail("center must be finite");
        }
        if self.normal.iter().any(|c| !c.is_finite()) {
            return fail("normal must be finite");
        }
        let norm =
            (self.normal[0] * self.normal[0] + self.normal[1] * self.normal[1] + self.normal[2] * self.normal[2])
                .sqrt();
        if (norm - 1.0).abs() > NORMAL_UNIT_TOL {
            return fail("normal must be a unit vector");
        }
        for c in &mut self.normal {
            *c /= norm;
        }
        if self.elements_m == 0 || self.elements_n == 0 {
            return fail("element counts must be at least 1");
        }
        if !(self.spacing_dm_m.is_finite() && self.spacing_dm_m > 0.0)
            || !(self.spacing_dn_m.is_finite() && self.spacing_dn_m > 0.0)
        {
            return fail("element spacing must be positive and finite");
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0 && self.amplitude <= 1.0) {
            return fail("amplitude must be in (0, 1]");
        }
        if !(self.pattern_exponent_q.is_finite() && self.pattern_exponent_q >= 0.0) {
            return fail("pattern exponent must be non-negative and finite");
        }
        Ok(())
    }

    /// Distance from `p` to the panel center and the angle between the
    /// center-to-`p` direction and the panel normal.
    pub fn leg(&self, p: &Point3) -> RisLeg {
        let v = [p.x - self.center.x, p.y - self.center.y, p.z - self.center.z];
        let dist = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!(dist > 0.0, "panel {} leg endpoint coincides with its center", self.id);
        let cos = (v[0] * self.normal[0] + v[1] * self.normal[1] + v[2] * self.normal[2]) / dist;
        RisLeg {
            distance_m: dist,
            angle_rad: cos.clamp(-1.0, 1.0).acos(),
        }
    }
}

/// Angles and distances of the reflected path tx -> panel center -> rx.
/// Angles are measured from the panel normal; values past pi/2 mean the
/// endpoint is behind the panel.
pub fn ris_angles(panel: &RisPanel, tx: &Point3, rx: &Point3) -> RisGeometry {
    let t = panel.leg(tx);
    let r = panel.leg(rx);
    RisGeometry {
        theta_t_rad: t.angle_rad,
        theta_r_rad: r.angle_rad,
        d1_m: t.distance_m,
        d2_m: r.distance_m,
    }
}

/// Receiver grid: `nx` x `ny` square cells of side `cell_size_m`, evaluated
/// at cell centers at a fixed receiver height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub origin_x_m: f64,
    pub origin_y_m: f64,
    pub cell_size_m: f64,
    pub nx: u32,
    pub ny: u32,
    pub receiver_height_m: f64,
}

impl GridSpec {
    fn validate(&self) -> Result<(), SceneError> {
        let fail = |reason| Err(SceneError::InvalidGrid { reason });
        if !(self.origin_x_m.is_finite() && self.origin_y_m.is_finite()) {
            return fail("origin must be finite");
        }
        if !(self.cell_size_m.is_finite() && self.cell_size_m > 0.0) {
            return fail("cell size must be positive and finite");
        }
        if self.nx == 0 || self.ny == 0 {
            return fail("grid must have at least one cell per axis");
        }
        if !(self.receiver_height_m.is_finite() && self.receiver_height_m > 0.0) {
            return fail("receiver height must be positive and finite");
        }
        Ok(())
    }

    pub fn point_count(&self) -> usize {
        self.nx as usize * self.ny as usize
    }
}

/// Center of grid cell (ix, iy) at receiver height. Indices must be in
/// range; this is a caller bug otherwise.
pub fn grid_point_position(grid: &GridSpec, ix: u32, iy: u32) -> Point3 {
    assert!(ix < grid.nx && iy < grid.ny, "grid index ({ix}, {iy}) out of range");
    Point3::new(
        grid.origin_x_m + (ix as f64 + 0.5) * grid.cell_size_m,
        grid.origin_y_m + (iy as f64 + 0.5) * grid.cell_size_m,
        grid.receiver_height_m,
    )
}

/// Options for the reflected-path model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisOptions {
    /// Composite unit-cell gain override (linear). When `None` the model
    /// uses 4 pi dm dn / lambda^2 per panel and carrier.
    pub unit_cell_gain_override: Option<f64>,
    /// Receive-side antenna gain applied on the panel-to-receiver leg, dBi.
    pub ris_rx_gain_dbi: f64,
}

impl Default for RisOptions {
    fn default() -> Self {
        Self {
            unit_cell_gain_override: None,
            ris_rx_gain_dbi: 0.0,
        }
    }
}

/// A validated simulation scene.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub buildings: Vec<Building>,
    pub cells: Vec<CellConfig>,
    pub ris_panels: Vec<RisPanel>,
    pub grid: GridSpec,
    /// Default base-station antenna height, the reference for panel height
    /// offsets.
    pub bs_height_m: f64,
    pub ris_options: RisOptions,
}

impl Scene {
    pub fn new(
        buildings: Vec<Building>,
        cells: Vec<CellConfig>,
        mut ris_panels: Vec<RisPanel>,
        grid: GridSpec,
        bs_height_m: f64,
        ris_options: RisOptions,
    ) -> Result<Self, SceneError> {
        grid.validate()?;
        if cells.is_empty() {
            return Err(SceneError::InvalidScene {
                reason: "at least one cell is required",
            });
        }
        if !(bs_height_m.is_finite() && bs_height_m > 0.0) {
            return Err(SceneError::InvalidScene {
                reason: "base-station height must be positive and finite",
            });
        }
        if let Some(g) = ris_options.unit_cell_gain_override {
            if !(g.is_finite() && g > 0.0) {
                return Err(SceneError::InvalidScene {
                    reason: "unit-cell gain override must be positive and finite",
                });
            }
        }
        if !ris_options.ris_rx_gain_dbi.is_finite() {
            return Err(SceneError::InvalidScene {
                reason: "panel receive gain must be finite",
            });
        }
        check_unique(buildings.iter().map(Building::id), |id| {
            SceneError::DuplicateBuildingId { id }
        })?;
        check_unique(cells.iter().map(|c| c.id), |id| SceneError::DuplicateCellId { id })?;
        check_unique(ris_panels.iter().map(|p| p.id), |id| SceneError::DuplicatePanelId {
            id,
        })?;
        for cell in &cells {
            cell.validate()?;
        }
        for panel in &mut ris_panels {
            panel.validate_and_normalize()?;
        }
        Ok(Self {
            buildings,
            cells,
            ris_panels,
            grid,
            bs_height_m,
            ris_options,
        })
    }

    /// Strict interior test against every building.
    pub fn point_in_building(&self, p: &Point3) -> bool {
        self.buildings.iter().any(|b| b.contains_interior(p))
    }

    /// True when no building interior intersects the open segment (a, b).
    /// Endpoints and grazing contact on faces do not block.
    pub fn los_visible(&self, a: &Point3, b: &Point3) -> bool {
        !self.buildings.iter().any(|b2| b2.occludes(a, b))
    }
}

fn check_unique(
    ids: impl Iterator<Item = u32>,
    err: impl Fn(u32) -> SceneError,
) -> Result<(), SceneError> {
    let mut seen = std::collections::HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(err(id));
        }
    }
    Ok(())
}
