//! Domain types and the closed-form geometric and channel primitives.

mod antenna;
mod channel;
mod config;
pub(crate) mod geometry;
mod pathloss;

pub use antenna::{interferer_gain_distribution, AntennaPattern, GainDistribution};
pub use channel::{normalized_noise, sinr, thermal_noise_watts};
pub use config::{default_vn_antenna, BeamPreset, ConfigError, ScenarioConfig};
pub use geometry::{
    footprint_minimum_radius, max_covered_distance, radial_distance, road_projection,
};
pub use pathloss::{Blockage, PathLossModel, PathLossParams};

/// Propagation state of a base station relative to the vehicle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkState {
    Los,
    Nlos,
}

impl LinkState {
    pub const ALL: [LinkState; 2] = [LinkState::Los, LinkState::Nlos];

    /// The other state.
    pub fn other(self) -> LinkState {
        match self {
            LinkState::Los => LinkState::Nlos,
            LinkState::Nlos => LinkState::Los,
        }
    }

    pub fn index(self) -> usize {
        match self {
            LinkState::Los => 0,
            LinkState::Nlos => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LinkState::Los => "LOS",
            LinkState::Nlos => "NLOS",
        }
    }
}

/// A primitive was evaluated outside its mathematical domain.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("{quantity} = {value} is outside its domain ({domain})")]
pub struct ModelError {
    pub quantity: &'static str,
    pub value: f64,
    pub domain: &'static str,
}

impl ModelError {
    pub(crate) fn domain(quantity: &'static str, value: f64, domain: &'static str) -> Self {
        ModelError {
            quantity,
            value,
            domain,
        }
    }
}
