use core::f64::consts::PI;

use super::{interferer_gain_distribution, AntennaPattern, GainDistribution, PathLossModel};
use crate::units::{db_to_linear, dbm_to_watts, deg_to_rad, kmh_to_mps, per_km_to_per_m};

/// A configuration field violates its constraint.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("invalid {field} = {value}: {constraint}")]
pub struct ConfigError {
    pub field: &'static str,
    pub value: f64,
    pub constraint: &'static str,
}

impl ConfigError {
    pub fn new(field: &'static str, value: f64, constraint: &'static str) -> Self {
        ConfigError {
            field,
            value,
            constraint,
        }
    }
}

/// Base-station beam presets: narrower beams pair with larger array gains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeamPreset {
    Deg30,
    Deg60,
    Deg90,
}

impl BeamPreset {
    pub const ALL: [BeamPreset; 3] = [BeamPreset::Deg30, BeamPreset::Deg60, BeamPreset::Deg90];

    pub fn beamwidth_deg(self) -> f64 {
        match self {
            BeamPreset::Deg30 => 30.0,
            BeamPreset::Deg60 => 60.0,
            BeamPreset::Deg90 => 90.0,
        }
    }

    pub fn main_gain_db(self) -> f64 {
        match self {
            BeamPreset::Deg30 => 20.0,
            BeamPreset::Deg60 => 12.0,
            BeamPreset::Deg90 => 6.0,
        }
    }

    pub fn elements(self) -> u32 {
        match self {
            BeamPreset::Deg30 => 64,
            BeamPreset::Deg60 => 16,
            BeamPreset::Deg90 => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BeamPreset::Deg30 => "psi30",
            BeamPreset::Deg60 => "psi60",
            BeamPreset::Deg90 => "psi90",
        }
    }

    /// Preset with the given beamwidth in degrees, if any.
    pub fn from_degrees(deg: f64) -> Option<BeamPreset> {
        BeamPreset::ALL
            .into_iter()
            .find(|p| (p.beamwidth_deg() - deg).abs() < 1e-9)
    }

    pub fn antenna(self) -> AntennaPattern {
        AntennaPattern {
            main_gain: db_to_linear(self.main_gain_db()),
            side_gain: db_to_linear(SIDE_LOBE_DB),
            beamwidth: deg_to_rad(self.beamwidth_deg()),
            elements: self.elements(),
        }
    }
}

const SIDE_LOBE_DB: f64 = -10.0;

/// Vehicle antenna: 60 degree beam, 12 dB main lobe.
pub fn default_vn_antenna() -> AntennaPattern {
    AntennaPattern {
        main_gain: db_to_linear(12.0),
        side_gain: db_to_linear(SIDE_LOBE_DB),
        beamwidth: deg_to_rad(60.0),
        elements: 16,
    }
}

/// Every physical and protocol parameter of a scenario, in SI linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Half the total road width `W`, m. Base stations stand at `y = ±W`.
    pub half_width: f64,
    pub lane_width: f64,
    pub num_lanes: u32,
    /// Road section length, m. Also the minimum simulation window.
    pub road_length: f64,
    /// Base stations per meter of road (both sides together).
    pub bs_density: f64,
    pub carrier_freq: f64,
    /// Total bandwidth, Hz.
    pub bandwidth: f64,
    pub tx_power_dbm: f64,
    /// Slot duration `T_S`, s.
    pub slot: f64,
    /// Vehicle speed, m/s.
    pub speed: f64,
    /// SINR threshold, linear.
    pub sinr_threshold: f64,
    /// Mean of the exponential (Rayleigh power) fading.
    pub rayleigh_mu: f64,
    pub pathloss: PathLossModel,
    pub bs_antenna: AntennaPattern,
    pub vn_antenna: AntennaPattern,
    /// Aggregate half beamwidth `theta_b`, rad. `None` means half the base
    /// station beamwidth.
    pub theta_b: Option<f64>,
}

impl ScenarioConfig {
    /// Highway defaults with the given path-loss model and beam preset.
    pub fn table_one(pathloss: PathLossModel, preset: BeamPreset) -> Self {
        let lane_width = 3.7;
        let num_lanes = 4;
        ScenarioConfig {
            half_width: num_lanes as f64 * lane_width / 2.0,
            lane_width,
            num_lanes,
            road_length: 50e3,
            bs_density: per_km_to_per_m(10.0),
            carrier_freq: 28e9,
            bandwidth: 1e9,
            tx_power_dbm: 27.0,
            slot: 0.3,
            speed: kmh_to_mps(100.0),
            sinr_threshold: db_to_linear(-5.0),
            rayleigh_mu: 1.0,
            pathloss,
            bs_antenna: preset.antenna(),
            vn_antenna: default_vn_antenna(),
            theta_b: None,
        }
    }

    pub fn urban(preset: BeamPreset) -> Self {
        Self::table_one(PathLossModel::urban(), preset)
    }

    pub fn rural(preset: BeamPreset) -> Self {
        Self::table_one(PathLossModel::rural(), preset)
    }

    pub fn with_preset(mut self, preset: BeamPreset) -> Self {
        self.bs_antenna = preset.antenna();
        self
    }

    pub fn with_density_per_km(mut self, per_km: f64) -> Self {
        self.bs_density = per_km_to_per_m(per_km);
        self
    }

    pub fn with_speed_kmh(mut self, kmh: f64) -> Self {
        self.speed = kmh_to_mps(kmh);
        self
    }

    pub fn with_slot(mut self, slot: f64) -> Self {
        self.slot = slot;
        self
    }

    /// Effective `theta_b`, rad.
    pub fn theta_b(&self) -> f64 {
        self.theta_b.unwrap_or(0.5 * self.bs_antenna.beamwidth)
    }

    /// Perfect-alignment gain `G_b G_vn` of the serving link.
    pub fn alignment_gain(&self) -> f64 {
        self.bs_antenna.main_gain * self.vn_antenna.main_gain
    }

    pub fn interferer_gains(&self) -> GainDistribution {
        interferer_gain_distribution(&self.bs_antenna, &self.vn_antenna, self.theta_b())
            .expect("theta_b validated")
    }

    /// Noise power normalized by the transmit power.
    pub fn normalized_noise(&self) -> f64 {
        super::normalized_noise(self.bandwidth, dbm_to_watts(self.tx_power_dbm))
    }

    /// Distance driven in one slot, `V T_S`.
    pub fn slot_travel(&self) -> f64 {
        self.speed * self.slot
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(field: &'static str, v: f64) -> Result<(), ConfigError> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::new(field, v, "must be finite and > 0"))
            }
        }
        fn non_negative(field: &'static str, v: f64) -> Result<(), ConfigError> {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::new(field, v, "must be finite and >= 0"))
            }
        }
        positive("half_width", self.half_width)?;
        positive("lane_width", self.lane_width)?;
        if self.num_lanes == 0 {
            return Err(ConfigError::new("num_lanes", 0.0, "must be >= 1"));
        }
        positive("road_length", self.road_length)?;
        non_negative("bs_density", self.bs_density)?;
        positive("carrier_freq", self.carrier_freq)?;
        positive("bandwidth", self.bandwidth)?;
        if !self.tx_power_dbm.is_finite() {
            return Err(ConfigError::new(
                "tx_power",
                self.tx_power_dbm,
                "must be finite",
            ));
        }
        positive("slot", self.slot)?;
        non_negative("speed", self.speed)?;
        positive("sinr_threshold", self.sinr_threshold)?;
        positive("rayleigh_mu", self.rayleigh_mu)?;
        self.pathloss.validate()?;
        self.bs_antenna.validate("bs_antenna")?;
        self.vn_antenna.validate("vn_antenna")?;
        if let Some(t) = self.theta_b {
            if !(0.0..=PI).contains(&t) {
                return Err(ConfigError::new("theta_b", t, "must be in [0, pi] rad"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        for preset in BeamPreset::ALL {
            ScenarioConfig::urban(preset).validate().unwrap();
            ScenarioConfig::rural(preset).validate().unwrap();
        }
        let cfg = ScenarioConfig::urban(BeamPreset::Deg30);
        assert!((cfg.half_width - 7.4).abs() < 1e-12);
        assert!((cfg.normalized_noise() - 7.990_826_045_218_862e-12).abs() < 1e-22);
        assert!((cfg.theta_b() - PI / 12.0).abs() < 1e-15);
        assert!((cfg.alignment_gain() - libm::pow(10.0, 3.2)).abs() < 1e-9);
    }

    #[test]
    fn presets_pair_width_and_gain() {
        let gains: Vec<f64> = BeamPreset::ALL.iter().map(|p| p.main_gain_db()).collect();
        assert_eq!(gains, [20.0, 12.0, 6.0]);
        assert_eq!(BeamPreset::from_degrees(60.0), Some(BeamPreset::Deg60));
        assert_eq!(BeamPreset::from_degrees(45.0), None);
    }

    #[test]
    fn validation_names_the_field() {
        let mut cfg = ScenarioConfig::urban(BeamPreset::Deg30);
        cfg.bs_density = -1e-3;
        assert_eq!(cfg.validate().unwrap_err().field, "bs_density");
        let mut cfg = ScenarioConfig::urban(BeamPreset::Deg30);
        cfg.slot = 0.0;
        assert_eq!(cfg.validate().unwrap_err().field, "slot");
        let mut cfg = ScenarioConfig::urban(BeamPreset::Deg30);
        cfg.theta_b = Some(4.0);
        assert_eq!(cfg.validate().unwrap_err().field, "theta_b");
    }
}
