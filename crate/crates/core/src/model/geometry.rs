//! Road geometry. The vehicle sits at the origin on the road center line and
//! base stations stand on the road edges at lateral offset `W`.

use super::ModelError;

/// Along-road half interval `sqrt(r^2 - W^2)` holding every base station within
/// radial distance `r`.
pub fn road_projection(r: f64, half_width: f64) -> Result<f64, ModelError> {
    if !(r >= half_width) {
        return Err(ModelError::domain("radial distance", r, "r >= W"));
    }
    Ok(projection(r, half_width))
}

/// [`road_projection`] clamped to zero when `r < W`: the interval is empty.
#[inline]
pub(crate) fn projection(r: f64, half_width: f64) -> f64 {
    if r <= half_width {
        0.0
    } else {
        // (r - W)(r + W) keeps precision right above the road edge
        libm::sqrt((r - half_width) * (r + half_width))
    }
}

/// Radial distance of a base station at along-road offset `x`.
#[inline]
pub fn radial_distance(x: f64, half_width: f64) -> f64 {
    libm::hypot(x, half_width)
}

/// Distance the vehicle can drive toward the serving base station before it
/// leaves the footprint of a beam of width `beamwidth` aimed at it from
/// radial distance `r`.
///
/// Law of sines in the triangle (base station, vehicle, beam edge on the
/// lane): `d = r sin(psi/2) / sin(pi/2 - psi/2 + arccos(W/r))`.
///
/// `d` is increasing in `psi`, and in `r` beyond [`footprint_minimum_radius`].
/// Between `W` and that radius it dips slightly below `W tan(psi/2)`.
pub fn max_covered_distance(r: f64, half_width: f64, beamwidth: f64) -> Result<f64, ModelError> {
    if !(r >= half_width) || !(r > 0.0) {
        return Err(ModelError::domain("radial distance", r, "r >= W, r > 0"));
    }
    if !(beamwidth > 0.0 && beamwidth < core::f64::consts::PI) {
        return Err(ModelError::domain("beamwidth", beamwidth, "0 < psi < pi"));
    }
    Ok(covered_distance(r, half_width, beamwidth))
}

/// Radius `W / cos(psi/4)` at which the footprint length is smallest.
pub fn footprint_minimum_radius(half_width: f64, beamwidth: f64) -> f64 {
    half_width / libm::cos(0.25 * beamwidth)
}

#[inline]
pub(crate) fn covered_distance(r: f64, half_width: f64, beamwidth: f64) -> f64 {
    let half = 0.5 * beamwidth;
    let theta = libm::acos((half_width / r).min(1.0));
    let beta = core::f64::consts::FRAC_PI_2 - half + theta;
    r * libm::sin(half) / libm::sin(beta)
}
