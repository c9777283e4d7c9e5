use super::{LinkState, ModelError};

/// Exponent and unit-distance gain of one propagation state: `gain(r) = C r^-alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams {
    pub exponent: f64,
    /// Linear gain at 1 m.
    pub unit_gain: f64,
}

/// How LOS blockage depends on distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Blockage {
    /// Obstacle-lane vehicles of density `obstacle_density` (1/m) and length
    /// `obstacle_length` (m); the LOS probability is distance independent.
    Rural {
        obstacle_density: f64,
        obstacle_length: f64,
    },
    /// Random building shapes; LOS probability `exp(-a_los d)`.
    Urban { a_los: f64 },
}

/// Two-state (LOS/NLOS) power-law path loss with a blockage model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    pub blockage: Blockage,
    pub los: PathLossParams,
    pub nlos: PathLossParams,
}

impl PathLossModel {
    /// Rural highway: blockage by trucks in the obstacle lanes.
    pub fn rural() -> Self {
        PathLossModel {
            blockage: Blockage::Rural {
                obstacle_density: 20e-3,
                obstacle_length: 11.1,
            },
            los: PathLossParams {
                exponent: 2.8,
                unit_gain: libm::pow(10.0, -6.1),
            },
            nlos: PathLossParams {
                exponent: 4.0,
                unit_gain: libm::pow(10.0, -6.1),
            },
        }
    }

    /// Urban highway, 28 GHz measurement-based parameters.
    pub fn urban() -> Self {
        PathLossModel {
            blockage: Blockage::Urban { a_los: 0.0149 },
            los: PathLossParams {
                exponent: 2.0,
                unit_gain: libm::pow(10.0, -7.2),
            },
            nlos: PathLossParams {
                exponent: 2.92,
                unit_gain: libm::pow(10.0, -6.14),
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self.blockage {
            Blockage::Rural { .. } => "rural",
            Blockage::Urban { .. } => "urban",
        }
    }

    pub fn params(&self, state: LinkState) -> PathLossParams {
        match state {
            LinkState::Los => self.los,
            LinkState::Nlos => self.nlos,
        }
    }

    /// Probability that a base station at `distance` is LOS.
    ///
    /// The analysis and the simulator both evaluate this at the along-road
    /// offset of the base station, which is what makes the nearest-LOS
    /// intensity integrate in closed form.
    pub fn los_probability(&self, distance: f64) -> f64 {
        match self.blockage {
            Blockage::Rural {
                obstacle_density,
                obstacle_length,
            } => libm::exp(-obstacle_density * obstacle_length),
            Blockage::Urban { a_los } => libm::exp(-a_los * distance),
        }
    }

    pub fn state_probability(&self, state: LinkState, distance: f64) -> f64 {
        let p = self.los_probability(distance);
        match state {
            LinkState::Los => p,
            LinkState::Nlos => 1.0 - p,
        }
    }

    /// `∫_0^x p_state(u) du`, the expected number of `state` base stations per
    /// unit intensity on one side of the origin up to offset `x`.
    pub fn state_mass(&self, state: LinkState, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let los = match self.blockage {
            Blockage::Rural { .. } => self.los_probability(0.0) * x,
            Blockage::Urban { a_los } => {
                if a_los == 0.0 {
                    x
                } else {
                    // (1 - e^{-a x}) / a without cancellation for small a x
                    -libm::expm1(-a_los * x) / a_los
                }
            }
        };
        match state {
            LinkState::Los => los,
            LinkState::Nlos => x - los,
        }
    }

    /// Total `∫_0^∞ p_state`, infinite unless the state dies out with distance.
    pub fn state_total_mass(&self, state: LinkState) -> f64 {
        match (self.blockage, state) {
            (Blockage::Urban { a_los }, LinkState::Los) if a_los > 0.0 => 1.0 / a_los,
            (Blockage::Rural { .. }, LinkState::Los) if self.los_probability(0.0) == 0.0 => 0.0,
            (Blockage::Rural { .. }, LinkState::Nlos) if self.los_probability(0.0) == 1.0 => 0.0,
            _ => f64::INFINITY,
        }
    }

    /// Linear path-loss gain `C_i r^{-alpha_i}`.
    pub fn pathloss_gain(&self, state: LinkState, r: f64) -> Result<f64, ModelError> {
        if !(r > 0.0) {
            return Err(ModelError::domain("distance", r, "r > 0"));
        }
        Ok(self.gain(state, r))
    }

    /// Unchecked [`pathloss_gain`](Self::pathloss_gain) for hot loops.
    #[inline]
    pub fn gain(&self, state: LinkState, r: f64) -> f64 {
        let p = self.params(state);
        p.unit_gain * libm::pow(r, -p.exponent)
    }

    /// Distance at which a base station in the other state has the same path
    /// loss as a `state` base station at `r`.
    pub fn equal_pathloss_distance(&self, state: LinkState, r: f64) -> Result<f64, ModelError> {
        if !(r > 0.0) {
            return Err(ModelError::domain("distance", r, "r > 0"));
        }
        Ok(self.equal_distance(state, r))
    }

    #[inline]
    pub(crate) fn equal_distance(&self, state: LinkState, r: f64) -> f64 {
        let own = self.params(state);
        let other = self.params(state.other());
        // ((C_other / C_own) r^{alpha_own})^{1/alpha_other}, in logs to keep
        // the extreme gains away from under/overflow
        let ln = (libm::log(other.unit_gain) - libm::log(own.unit_gain)
            + own.exponent * libm::log(r))
            / other.exponent;
        libm::exp(ln)
    }

    pub fn validate(&self) -> Result<(), super::ConfigError> {
        use super::ConfigError;
        for (field_a, field_c, p) in [
            ("alpha_los", "c_los", self.los),
            ("alpha_nlos", "c_nlos", self.nlos),
        ] {
            if !(p.exponent > 0.0 && p.exponent.is_finite()) {
                return Err(ConfigError::new(field_a, p.exponent, "must be > 0"));
            }
            if !(p.unit_gain > 0.0 && p.unit_gain.is_finite()) {
                return Err(ConfigError::new(field_c, p.unit_gain, "must be > 0"));
            }
        }
        match self.blockage {
            Blockage::Rural {
                obstacle_density,
                obstacle_length,
            } => {
                if !(obstacle_density >= 0.0 && obstacle_density.is_finite()) {
                    return Err(ConfigError::new(
                        "obstacle_density",
                        obstacle_density,
                        "must be >= 0",
                    ));
                }
                if !(obstacle_length >= 0.0 && obstacle_length.is_finite()) {
                    return Err(ConfigError::new(
                        "obstacle_length",
                        obstacle_length,
                        "must be >= 0",
                    ));
                }
            }
            Blockage::Urban { a_los } => {
                if !(a_los >= 0.0 && a_los.is_finite()) {
                    return Err(ConfigError::new("a_los", a_los, "must be >= 0"));
                }
            }
        }
        Ok(())
    }
}
