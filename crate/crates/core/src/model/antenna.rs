use core::f64::consts::PI;

use super::{ConfigError, ModelError};

/// Sectored (flat-top) antenna: constant gain inside the main lobe, constant
/// side-lobe gain elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    /// Main-lobe gain, linear.
    pub main_gain: f64,
    /// Side-lobe gain, linear.
    pub side_gain: f64,
    /// Main-lobe width, radians.
    pub beamwidth: f64,
    /// Array size, informational only.
    pub elements: u32,
}

impl AntennaPattern {
    pub fn validate(&self, prefix: &'static str) -> Result<(), ConfigError> {
        if !(self.side_gain > 0.0 && self.side_gain.is_finite()) {
            return Err(ConfigError::new(
                prefix,
                self.side_gain,
                "side-lobe gain must be > 0",
            ));
        }
        if !(self.main_gain >= self.side_gain && self.main_gain.is_finite()) {
            return Err(ConfigError::new(
                prefix,
                self.main_gain,
                "main-lobe gain must be >= side-lobe gain",
            ));
        }
        if !(self.beamwidth > 0.0 && self.beamwidth < PI) {
            return Err(ConfigError::new(
                prefix,
                self.beamwidth,
                "beamwidth must be in (0, pi) rad",
            ));
        }
        Ok(())
    }
}

/// Two-point distribution of the antenna gain seen from an interfering base
/// station whose beam points in a uniformly random direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainDistribution {
    /// `(gain, probability)`, main-lobe product first.
    pub outcomes: [(f64, f64); 2],
}

impl GainDistribution {
    pub fn mean(&self) -> f64 {
        self.outcomes.iter().map(|(g, p)| g * p).sum()
    }

    /// Gain for a uniform draw `u` in `[0, 1)`.
    #[inline]
    pub fn quantile(&self, u: f64) -> f64 {
        if u < self.outcomes[0].1 {
            self.outcomes[0].0
        } else {
            self.outcomes[1].0
        }
    }
}

/// Interferer gain: `G_b G_vn` with probability `theta_b / pi`, otherwise
/// `g_b g_vn`.
pub fn interferer_gain_distribution(
    bs: &AntennaPattern,
    vn: &AntennaPattern,
    theta_b: f64,
) -> Result<GainDistribution, ModelError> {
    if !(0.0..=PI).contains(&theta_b) {
        return Err(ModelError::domain("theta_b", theta_b, "0 <= theta_b <= pi"));
    }
    let p_main = theta_b / PI;
    Ok(GainDistribution {
        outcomes: [
            (bs.main_gain * vn.main_gain, p_main),
            (bs.side_gain * vn.side_gain, 1.0 - p_main),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{db_to_linear, deg_to_rad};
    use proptest::prelude::*;

    fn bs30() -> AntennaPattern {
        AntennaPattern {
            main_gain: db_to_linear(20.0),
            side_gain: db_to_linear(-10.0),
            beamwidth: deg_to_rad(30.0),
            elements: 64,
        }
    }

    fn vn() -> AntennaPattern {
        AntennaPattern {
            main_gain: db_to_linear(12.0),
            side_gain: db_to_linear(-10.0),
            beamwidth: deg_to_rad(60.0),
            elements: 16,
        }
    }

    #[test]
    fn degenerate_angles() {
        let d = interferer_gain_distribution(&bs30(), &vn(), 0.0).unwrap();
        assert_eq!(d.outcomes[0].1, 0.0);
        assert_eq!(d.outcomes[1].1, 1.0);
        assert!((d.mean() - 0.01).abs() < 1e-15);
        let d = interferer_gain_distribution(&bs30(), &vn(), PI).unwrap();
        assert_eq!(d.outcomes[0].1, 1.0);
        assert_eq!(d.outcomes[1].1, 0.0);
    }

    #[test]
    fn half_beamwidth_preset() {
        let d = interferer_gain_distribution(&bs30(), &vn(), PI / 12.0).unwrap();
        assert!((d.outcomes[0].0 - libm::pow(10.0, 3.2)).abs() < 1e-9);
        assert!((d.outcomes[0].1 - 1.0 / 12.0).abs() < 1e-15);
        assert!((d.outcomes[1].0 - 1e-2).abs() < 1e-15);
        assert!((d.outcomes[1].1 - 11.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range_angle() {
        assert!(interferer_gain_distribution(&bs30(), &vn(), -0.1).is_err());
        assert!(interferer_gain_distribution(&bs30(), &vn(), 3.2).is_err());
    }

    #[test]
    fn pattern_validation() {
        let mut p = bs30();
        assert!(p.validate("bs_antenna").is_ok());
        p.main_gain = 0.05;
        assert!(p.validate("bs_antenna").is_err());
        let mut p = bs30();
        p.beamwidth = PI;
        assert!(p.validate("bs_antenna").is_err());
    }

    proptest! {
        #[test]
        fn probabilities_sum_to_one(theta in 0.0f64..=PI) {
            let d = interferer_gain_distribution(&bs30(), &vn(), theta).unwrap();
            let total = d.outcomes[0].1 + d.outcomes[1].1;
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }
    }
}
