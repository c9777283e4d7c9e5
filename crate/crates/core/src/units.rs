//! Unit conversions applied at the configuration boundary.

/// Boltzmann constant as used for the thermal noise floor, J/K.
pub const BOLTZMANN: f64 = 1.381e-23;

/// Reference noise temperature, K.
pub const NOISE_TEMPERATURE: f64 = 290.0;

/// `10^(x/10)`: dB to a linear ratio, or dBm to mW.
pub fn db_to_linear(x: f64) -> f64 {
    libm::pow(10.0, x / 10.0)
}

/// Inverse of [`db_to_linear`].
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * libm::log10(x)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm) * 1e-3
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts * 1e3)
}

pub fn kmh_to_mps(kmh: f64) -> f64 {
    kmh / 3.6
}

pub fn mps_to_kmh(mps: f64) -> f64 {
    mps * 3.6
}

pub fn per_km_to_per_m(per_km: f64) -> f64 {
    per_km * 1e-3
}

pub fn per_m_to_per_km(per_m: f64) -> f64 {
    per_m * 1e3
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg * core::f64::consts::PI / 180.0
}

pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / core::f64::consts::PI
}
