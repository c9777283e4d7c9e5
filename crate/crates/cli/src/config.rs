//! Scenario files.
//!
//! A scenario is a TOML document with the sections `[road]`, `[network]`,
//! `[mobility]`, `[antenna]` (plus `[antenna.vehicle]`) and `[pathloss]`.
//! Keys carry their unit as a suffix (`_km`, `_db`, `_kmh`, ...); values are
//! converted to SI linear units on load. Only `pathloss.model` is required,
//! everything else falls back to the highway defaults.

use std::path::Path;

use mmv2x_core::model::{AntennaPattern, Blockage, PathLossModel};
use mmv2x_core::units::{db_to_linear, deg_to_rad, kmh_to_mps, per_km_to_per_m};
use mmv2x_core::{BeamPreset, ScenarioConfig};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("{origin}: invalid {field}: {constraint}")]
    Invalid {
        origin: String,
        field: String,
        constraint: String,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    road: RoadSection,
    #[serde(default)]
    network: NetworkSection,
    #[serde(default)]
    mobility: MobilitySection,
    #[serde(default)]
    antenna: AntennaSection,
    pathloss: Option<PathlossSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoadSection {
    lane_width_m: Option<f64>,
    num_lanes: Option<u32>,
    length_km: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkSection {
    bs_density_per_km: Option<f64>,
    carrier_freq_ghz: Option<f64>,
    bandwidth_ghz: Option<f64>,
    tx_power_dbm: Option<f64>,
    sinr_threshold_db: Option<f64>,
    rayleigh_mu: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MobilitySection {
    slot_s: Option<f64>,
    speed_kmh: Option<f64>,
    speed_mps: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntennaSection {
    preset_deg: Option<f64>,
    beamwidth_deg: Option<f64>,
    main_gain_db: Option<f64>,
    side_gain_db: Option<f64>,
    elements: Option<u32>,
    theta_b_deg: Option<f64>,
    #[serde(default)]
    vehicle: VehicleSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VehicleSection {
    beamwidth_deg: Option<f64>,
    main_gain_db: Option<f64>,
    side_gain_db: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathlossKind {
    Urban,
    Rural,
}

impl PathlossKind {
    pub fn model(self) -> PathLossModel {
        match self {
            PathlossKind::Urban => PathLossModel::urban(),
            PathlossKind::Rural => PathLossModel::rural(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathlossSection {
    model: PathlossKind,
    los_exponent: Option<f64>,
    nlos_exponent: Option<f64>,
    los_unit_gain_db: Option<f64>,
    nlos_unit_gain_db: Option<f64>,
    a_los_per_m: Option<f64>,
    obstacle_density_per_km: Option<f64>,
    obstacle_length_m: Option<f64>,
}

/// Reads and validates a scenario file.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig, ConfigFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text, &path.display().to_string())
}

/// Parses scenario text; `origin` names the source in error messages.
pub fn parse_config_str(text: &str, origin: &str) -> Result<ScenarioConfig, ConfigFileError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| ConfigFileError::Parse {
        origin: origin.to_string(),
        message: e.to_string().trim_end().to_string(),
    })?;
    let invalid = |field: &str, constraint: &str| ConfigFileError::Invalid {
        origin: origin.to_string(),
        field: field.to_string(),
        constraint: constraint.to_string(),
    };

    let pl = file.pathloss.ok_or_else(|| {
        invalid(
            "pathloss.model",
            "missing path-loss variant, expected \"urban\" or \"rural\"",
        )
    })?;
    let pathloss = build_pathloss(&pl).map_err(|(f, c)| invalid(f, c))?;

    let preset = match file.antenna.preset_deg {
        None => BeamPreset::Deg30,
        Some(deg) => BeamPreset::from_degrees(deg)
            .ok_or_else(|| invalid("antenna.preset_deg", "must be 30, 60 or 90"))?,
    };
    let mut cfg = ScenarioConfig::table_one(pathloss, preset);

    let road = &file.road;
    if let Some(v) = road.lane_width_m {
        cfg.lane_width = v;
    }
    if let Some(n) = road.num_lanes {
        cfg.num_lanes = n;
    }
    cfg.half_width = cfg.num_lanes as f64 * cfg.lane_width / 2.0;
    if let Some(v) = road.length_km {
        cfg.road_length = v * 1e3;
    }

    let net = &file.network;
    if let Some(v) = net.bs_density_per_km {
        cfg.bs_density = per_km_to_per_m(v);
    }
    if let Some(v) = net.carrier_freq_ghz {
        cfg.carrier_freq = v * 1e9;
    }
    if let Some(v) = net.bandwidth_ghz {
        cfg.bandwidth = v * 1e9;
    }
    if let Some(v) = net.tx_power_dbm {
        cfg.tx_power_dbm = v;
    }
    if let Some(v) = net.sinr_threshold_db {
        cfg.sinr_threshold = db_to_linear(v);
    }
    if let Some(v) = net.rayleigh_mu {
        cfg.rayleigh_mu = v;
    }

    let mob = &file.mobility;
    if let Some(v) = mob.slot_s {
        cfg.slot = v;
    }
    match (mob.speed_kmh, mob.speed_mps) {
        (Some(_), Some(_)) => {
            return Err(invalid(
                "mobility.speed_kmh",
                "give either speed_kmh or speed_mps, not both",
            ))
        }
        (Some(v), None) => cfg.speed = kmh_to_mps(v),
        (None, Some(v)) => cfg.speed = v,
        (None, None) => {}
    }

    let ant = &file.antenna;
    cfg.bs_antenna = override_antenna(
        cfg.bs_antenna,
        ant.beamwidth_deg,
        ant.main_gain_db,
        ant.side_gain_db,
    );
    if let Some(n) = ant.elements {
        cfg.bs_antenna.elements = n;
    }
    cfg.theta_b = ant.theta_b_deg.map(deg_to_rad);
    let veh = &ant.vehicle;
    cfg.vn_antenna = override_antenna(
        cfg.vn_antenna,
        veh.beamwidth_deg,
        veh.main_gain_db,
        veh.side_gain_db,
    );

    cfg.validate().map_err(|e| ConfigFileError::Invalid {
        origin: origin.to_string(),
        field: file_key(e.field).to_string(),
        constraint: format!("{} (got {} in SI units)", e.constraint, e.value),
    })?;
    Ok(cfg)
}

fn build_pathloss(pl: &PathlossSection) -> Result<PathLossModel, (&'static str, &'static str)> {
    let mut model = pl.model.model();
    if let Some(v) = pl.los_exponent {
        model.los.exponent = v;
    }
    if let Some(v) = pl.nlos_exponent {
        model.nlos.exponent = v;
    }
    if let Some(v) = pl.los_unit_gain_db {
        model.los.unit_gain = db_to_linear(v);
    }
    if let Some(v) = pl.nlos_unit_gain_db {
        model.nlos.unit_gain = db_to_linear(v);
    }
    match &mut model.blockage {
        Blockage::Urban { a_los } => {
            if pl.obstacle_density_per_km.is_some() || pl.obstacle_length_m.is_some() {
                return Err((
                    "pathloss.obstacle_density_per_km",
                    "obstacle keys apply to the rural model only",
                ));
            }
            if let Some(v) = pl.a_los_per_m {
                *a_los = v;
            }
        }
        Blockage::Rural {
            obstacle_density,
            obstacle_length,
        } => {
            if pl.a_los_per_m.is_some() {
                return Err(("pathloss.a_los_per_m", "applies to the urban model only"));
            }
            if let Some(v) = pl.obstacle_density_per_km {
                *obstacle_density = per_km_to_per_m(v);
            }
            if let Some(v) = pl.obstacle_length_m {
                *obstacle_length = v;
            }
        }
    }
    Ok(model)
}

fn override_antenna(
    mut base: AntennaPattern,
    beamwidth_deg: Option<f64>,
    main_gain_db: Option<f64>,
    side_gain_db: Option<f64>,
) -> AntennaPattern {
    if let Some(v) = beamwidth_deg {
        base.beamwidth = deg_to_rad(v);
    }
    if let Some(v) = main_gain_db {
        base.main_gain = db_to_linear(v);
    }
    if let Some(v) = side_gain_db {
        base.side_gain = db_to_linear(v);
    }
    base
}

/// Maps a validated field back to the key a user would edit.
fn file_key(field: &str) -> &str {
    match field {
        "half_width" | "lane_width" => "road.lane_width_m",
        "num_lanes" => "road.num_lanes",
        "road_length" => "road.length_km",
        "bs_density" => "network.bs_density_per_km",
        "carrier_freq" => "network.carrier_freq_ghz",
        "bandwidth" => "network.bandwidth_ghz",
        "tx_power" => "network.tx_power_dbm",
        "sinr_threshold" => "network.sinr_threshold_db",
        "rayleigh_mu" => "network.rayleigh_mu",
        "slot" => "mobility.slot_s",
        "speed" => "mobility.speed_kmh",
        "bs_antenna" => "antenna",
        "vn_antenna" => "antenna.vehicle",
        "theta_b" => "antenna.theta_b_deg",
        other => other,
    }
}

/// A scenario file with every key at its default value.
pub fn default_scenario_toml(kind: PathlossKind) -> String {
    let model = match kind {
        PathlossKind::Urban => "urban",
        PathlossKind::Rural => "rural",
    };
    format!(
        r#"[road]
lane_width_m = 3.7
num_lanes = 4
length_km = 50.0

[network]
bs_density_per_km = 10.0
carrier_freq_ghz = 28.0
bandwidth_ghz = 1.0
tx_power_dbm = 27.0
sinr_threshold_db = -5.0
rayleigh_mu = 1.0

[mobility]
slot_s = 0.3
speed_kmh = 100.0

[antenna]
preset_deg = 30
side_gain_db = -10.0

[antenna.vehicle]
beamwidth_deg = 60.0
main_gain_db = 12.0
side_gain_db = -10.0

[pathloss]
model = "{model}"
"#
    )
}
