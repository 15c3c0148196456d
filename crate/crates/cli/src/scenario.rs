//! Scenario files: a strict JSON schema mirroring the scene model, with
//! explicit units in every field name.
//!
//! Unknown keys are rejected so typos fail loudly instead of silently
//! changing the experiment. Validation errors name the offending field path.

use riscope_core::scene::{
    Building, CellConfig, GridSpec, Margins, RisOptions, RisPanel, Scene, SceneError,
};
use riscope_core::Point3;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub name: String,
    /// Free-form note; the shipped scenarios use it to state that runs are
    /// seed-free and bit-reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    /// Default antenna height; also the reference for panel height offsets.
    pub bs_antenna_height_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSchema {
    pub origin_x_m: f64,
    pub origin_y_m: f64,
    pub cell_size_m: f64,
    pub nx: u32,
    pub ny: u32,
    pub receiver_height_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingSchema {
    pub id: u32,
    /// Footprint vertices in meters, either winding order.
    pub footprint: Vec<[f64; 2]>,
    pub height_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteSchema {
    pub x_m: f64,
    pub y_m: f64,
    /// Antenna height; defaults to `meta.bs_antenna_height_m` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginsSchema {
    #[serde(default)]
    pub interference_db: f64,
    #[serde(default)]
    pub doppler_db: f64,
    #[serde(default)]
    pub fading_db: f64,
    #[serde(default)]
    pub shadowing_db: f64,
    #[serde(default)]
    pub implementation_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSchema {
    pub id: u32,
    pub site: SiteSchema,
    pub frequency_hz: f64,
    pub tx_power_dbm: f64,
    pub antenna_gain_dbi: f64,
    pub feeder_loss_db: f64,
    #[serde(default)]
    pub margins: MarginsSchema,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSchema {
    pub x_m: f64,
    pub y_m: f64,
    pub z_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelSchema {
    pub id: u32,
    pub center: PointSchema,
    /// Outward unit normal of the panel face.
    pub normal: [f64; 3],
    pub elements_m: u32,
    pub elements_n: u32,
    pub spacing_dm_m: f64,
    pub spacing_dn_m: f64,
    pub amplitude: f64,
    /// Defaults to `model_options.pattern_exponent_default` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern_exponent_q: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelOptionsSchema {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_cell_gain_override: Option<f64>,
    #[serde(default = "default_pattern_exponent")]
    pub pattern_exponent_default: f64,
    #[serde(default)]
    pub ris_rx_gain_dbi: f64,
}

fn default_pattern_exponent() -> f64 {
    1.0
}

impl Default for ModelOptionsSchema {
    fn default() -> Self {
        Self {
            unit_cell_gain_override: None,
            pattern_exponent_default: default_pattern_exponent(),
            ris_rx_gain_dbi: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub meta: Meta,
    pub grid: GridSchema,
    #[serde(default)]
    pub buildings: Vec<BuildingSchema>,
    pub cells: Vec<CellSchema>,
    #[serde(default)]
    pub ris_panels: Vec<PanelSchema>,
    #[serde(default)]
    pub model_options: ModelOptionsSchema,
}

/// Sub-field suffix for a scene validation reason, so error paths point at
/// the exact offending field. Reasons are the static strings the scene
/// constructors emit; unknown ones fall back to the collection entry.
fn field_suffix(reason: &str) -> &'static str {
    match reason {
        "amplitude must be in (0, 1]" => ".amplitude",
        "normal must be a unit vector" | "normal must be finite" => ".normal",
        "center must be finite" => ".center",
        "element counts must be at least 1" => ".elements_m/elements_n",
        "element spacing must be positive and finite" => ".spacing_dm_m/spacing_dn_m",
        "pattern exponent must be non-negative and finite" => ".pattern_exponent_q",
        "frequency must be positive and finite" => ".frequency_hz",
        "site position must be finite" => ".site",
        "tx power must be finite" => ".tx_power_dbm",
        "antenna gain must be finite" => ".antenna_gain_dbi",
        "feeder loss must be non-negative and finite" => ".feeder_loss_db",
        "margins must be finite" => ".margins",
        "footprint needs at least 3 vertices"
        | "footprint vertices must be finite"
        | "footprint must be a simple polygon"
        | "footprint has zero area" => ".footprint",
        "height must be positive and finite" => ".height_m",
        _ => "",
    }
}

impl ScenarioFile {
    /// Builds the validated scene. Errors carry the field path of the first
    /// violation, e.g. `ris_panels[2].amplitude`.
    pub fn to_scene(&self) -> Result<Scene, ScenarioError> {
        let mut buildings = Vec::with_capacity(self.buildings.len());
        for (i, b) in self.buildings.iter().enumerate() {
            let built = Building::new(b.id, b.footprint.clone(), b.height_m).map_err(|e| {
                let reason = scene_reason(&e);
                ScenarioError::Invalid {
                    field: format!("buildings[{i}]{}", field_suffix(&reason)),
                    reason,
                }
            })?;
            buildings.push(built);
        }

        let cells = self
            .cells
            .iter()
            .map(|c| CellConfig {
                id: c.id,
                site: Point3::new(
                    c.site.x_m,
                    c.site.y_m,
                    c.site.z_m.unwrap_or(self.meta.bs_antenna_height_m),
                ),
                frequency_hz: c.frequency_hz,
                tx_power_dbm: c.tx_power_dbm,
                antenna_gain_dbi: c.antenna_gain_dbi,
                feeder_loss_db: c.feeder_loss_db,
                margins: Margins {
                    interference_db: c.margins.interference_db,
                    doppler_db: c.margins.doppler_db,
                    fading_db: c.margins.fading_db,
                    shadowing_db: c.margins.shadowing_db,
                    implementation_db: c.margins.implementation_db,
                },
            })
            .collect();

        let ris_panels = self
            .ris_panels
            .iter()
            .map(|p| RisPanel {
                id: p.id,
                center: Point3::new(p.center.x_m, p.center.y_m, p.center.z_m),
                normal: p.normal,
                elements_m: p.elements_m,
                elements_n: p.elements_n,
                spacing_dm_m: p.spacing_dm_m,
                spacing_dn_m: p.spacing_dn_m,
                amplitude: p.amplitude,
                pattern_exponent_q: p
                    .pattern_exponent_q
                    .unwrap_or(self.model_options.pattern_exponent_default),
            })
            .collect();

        let grid = GridSpec {
            origin_x_m: self.grid.origin_x_m,
            origin_y_m: self.grid.origin_y_m,
            cell_size_m: self.grid.cell_size_m,
            nx: self.grid.nx,
            ny: self.grid.ny,
            receiver_height_m: self.grid.receiver_height_m,
        };
        let options = RisOptions {
            unit_cell_gain_override: self.model_options.unit_cell_gain_override,
            ris_rx_gain_dbi: self.model_options.ris_rx_gain_dbi,
        };

        Scene::new(
            buildings,
            cells,
            ris_panels,
            grid,
            self.meta.bs_antenna_height_m,
            options,
        )
        .map_err(|e| self.map_scene_error(e))
    }

    fn map_scene_error(&self, err: SceneError) -> ScenarioError {
        let reason = scene_reason(&err);
        let field = match &err {
            SceneError::InvalidBuilding { id, .. } => {
                indexed("buildings", self.buildings.iter().position(|b| b.id == *id), &reason)
            }
            SceneError::InvalidCell { id, .. } => {
                indexed("cells", self.cells.iter().position(|c| c.id == *id), &reason)
            }
            SceneError::InvalidPanel { id, .. } => {
                indexed("ris_panels", self.ris_panels.iter().position(|p| p.id == *id), &reason)
            }
            SceneError::InvalidGrid { .. } => "grid".to_string(),
            SceneError::InvalidScene { .. } => "scenario".to_string(),
            SceneError::DuplicateBuildingId { .. } => "buildings".to_string(),
            SceneError::DuplicateCellId { .. } => "cells".to_string(),
            SceneError::DuplicatePanelId { .. } => "ris_panels".to_string(),
        };
        ScenarioError::Invalid { field, reason }
    }

    /// Inverse of [`ScenarioFile::to_scene`]: every defaulted field is
    /// written out explicitly.
    pub fn from_scene(scene: &Scene, name: &str, notes: Option<String>) -> Self {
        Self {
            meta: Meta {
                name: name.to_string(),
                notes,
                bs_antenna_height_m: scene.bs_height_m,
            },
            grid: GridSchema {
                origin_x_m: scene.grid.origin_x_m,
                origin_y_m: scene.grid.origin_y_m,
                cell_size_m: scene.grid.cell_size_m,
                nx: scene.grid.nx,
                ny: scene.grid.ny,
                receiver_height_m: scene.grid.receiver_height_m,
            },
            buildings: scene
                .buildings
                .iter()
                .map(|b| BuildingSchema {
                    id: b.id(),
                    footprint: b.footprint().to_vec(),
                    height_m: b.height_m(),
                })
                .collect(),
            cells: scene
                .cells
                .iter()
                .map(|c| CellSchema {
                    id: c.id,
                    site: SiteSchema {
                        x_m: c.site.x,
                        y_m: c.site.y,
                        z_m: Some(c.site.z),
                    },
                    frequency_hz: c.frequency_hz,
                    tx_power_dbm: c.tx_power_dbm,
                    antenna_gain_dbi: c.antenna_gain_dbi,
                    feeder_loss_db: c.feeder_loss_db,
                    margins: MarginsSchema {
                        interference_db: c.margins.interference_db,
                        doppler_db: c.margins.doppler_db,
                        fading_db: c.margins.fading_db,
                        shadowing_db: c.margins.shadowing_db,
                        implementation_db: c.margins.implementation_db,
                    },
                })
                .collect(),
            ris_panels: scene
                .ris_panels
                .iter()
                .map(|p| PanelSchema {
                    id: p.id,
                    center: PointSchema {
                        x_m: p.center.x,
                        y_m: p.center.y,
                        z_m: p.center.z,
                    },
                    normal: p.normal,
                    elements_m: p.elements_m,
                    elements_n: p.elements_n,
                    spacing_dm_m: p.spacing_dm_m,
                    spacing_dn_m: p.spacing_dn_m,
                    amplitude: p.amplitude,
                    pattern_exponent_q: Some(p.pattern_exponent_q),
                })
                .collect(),
            model_options: ModelOptionsSchema {
                unit_cell_gain_override: scene.ris_options.unit_cell_gain_override,
                pattern_exponent_default: default_pattern_exponent(),
                ris_rx_gain_dbi: scene.ris_options.ris_rx_gain_dbi,
            },
        }
    }
}

fn indexed(collection: &str, index: Option<usize>, reason: &str) -> String {
    match index {
        Some(i) => format!("{collection}[{i}]{}", field_suffix(reason)),
        None => collection.to_string(),
    }
}

/// Extracts the bare reason from a scene error's message (the part after
/// the item prefix).
fn scene_reason(err: &SceneError) -> String {
    match err {
        SceneError::InvalidBuilding { reason, .. }
        | SceneError::InvalidCell { reason, .. }
        | SceneError::InvalidPanel { reason, .. }
        | SceneError::InvalidGrid { reason }
        | SceneError::InvalidScene { reason } => (*reason).to_string(),
        other => other.to_string(),
    }
}

/// Parses and validates a scenario file into a scene.
pub fn load_scenario(path: &Path) -> Result<Scene, ScenarioError> {
    load_scenario_file(path)?.to_scene()
}

/// Parses a scenario file without building the scene.
pub fn load_scenario_file(path: &Path) -> Result<ScenarioFile, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ScenarioError::Parse {
        path: path.to_path_buf(),
        source,
    })
}
