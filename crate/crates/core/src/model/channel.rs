use crate::units::{BOLTZMANN, NOISE_TEMPERATURE};

/// Thermal noise power `k T W`, watts.
pub fn thermal_noise_watts(bandwidth_hz: f64) -> f64 {
    BOLTZMANN * NOISE_TEMPERATURE * bandwidth_hz
}

/// Thermal noise normalized by the transmit power (dimensionless).
pub fn normalized_noise(bandwidth_hz: f64, tx_power_watts: f64) -> f64 {
    thermal_noise_watts(bandwidth_hz) / tx_power_watts
}

/// `h Δ ℓ / (I + σ²)`.
#[inline]
pub fn sinr(
    signal_fade: f64,
    signal_gain: f64,
    signal_pathloss: f64,
    interference: f64,
    noise: f64,
) -> f64 {
    signal_fade * signal_gain * signal_pathloss / (interference + noise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{dbm_to_watts, watts_to_dbm};

    #[test]
    fn noise_floor_for_one_gigahertz() {
        let n = thermal_noise_watts(1e9);
        assert!((watts_to_dbm(n) - (-83.974_083_235_224_13)).abs() < 1e-9);
        let sigma2 = normalized_noise(1e9, dbm_to_watts(27.0));
        assert!((sigma2 - 7.990_826_045_218_862e-12).abs() < 1e-22);
        assert!((10.0 * sigma2.log10() - (-110.974_083_235_224_13)).abs() < 1e-9);
        assert_eq!(normalized_noise(1e9, n), 1.0);
    }

    #[test]
    fn sinr_examples() {
        assert_eq!(sinr(1.0, 2.0, 0.5e-12, 0.0, 1e-12), 1.0);
        assert_eq!(sinr(0.0, 1e3, 1e-9, 1e-12, 1e-12), 0.0);
        assert!((sinr(1.0, 1.0, 4e-12, 1e-12, 1e-12) - 2.0).abs() < 1e-15);
    }
}
