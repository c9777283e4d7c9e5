use super::{clamp_probability, AnalyticError, AnalyticModel};
use crate::model::geometry::{covered_distance, footprint_minimum_radius, projection};
use crate::model::{LinkState, ModelError};
use crate::numerics::{find_root_decreasing, integrate_finite};

/// Connectivity with both of its factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectivityResult {
    pub p_c: f64,
    pub p_cov: f64,
    pub p_nl: f64,
}

impl AnalyticModel {
    /// Smallest serving distance whose beam footprint outlasts `travel`
    /// meters of driving.
    pub fn alignment_radius(&self, travel: f64) -> Result<f64, AnalyticError> {
        let w = self.w();
        let psi = self.cfg.bs_antenna.beamwidth;
        let half = 0.5 * psi;
        let eta = core::f64::consts::FRAC_PI_2 - half;
        let (sin_eta, cos_eta) = (libm::sin(eta), libm::cos(eta));
        let reach = travel / libm::sin(half);
        let g = |r: f64| {
            let c = (w / r).min(1.0);
            r - reach * (c * sin_eta + libm::sqrt(1.0 - c * c) * cos_eta)
        };
        Ok(find_root_decreasing(g, w, w + reach + w)?)
    }

    /// Probability that the vehicle stays inside the serving beam footprint
    /// for a whole slot.
    pub fn no_leave_probability(&self) -> Result<f64, AnalyticError> {
        self.no_leave_for_travel(self.cfg.slot_travel())
    }

    fn no_leave_for_travel(&self, travel: f64) -> Result<f64, AnalyticError> {
        if travel == 0.0 {
            return Ok(1.0);
        }
        if self.lambda() == 0.0 {
            return Ok(0.0);
        }
        let w = self.w();
        let (x_lo, x_hi) = if travel >= covered_distance(w, w, self.cfg.bs_antenna.beamwidth) {
            (0.0, projection(self.alignment_radius(travel)?, w))
        } else {
            match self.footprint_offsets(travel)? {
                Some(x) => x,
                None => return Ok(1.0),
            }
        };
        let mut total = 0.0;
        for state in LinkState::ALL {
            total += self.serving_integral(state, 0.0, x_lo, |_| 1.0)?.value;
            total += self
                .serving_integral(state, x_hi, f64::INFINITY, |_| 1.0)?
                .value;
        }
        Ok(clamp_probability("no-leave", total))
    }

    /// `P_C = P_cov P_NL` at the configured threshold.
    pub fn connectivity_probability(&self) -> Result<ConnectivityResult, AnalyticError> {
        let p_cov = self.coverage()?.p_cov;
        let p_nl = self.no_leave_probability()?;
        Ok(ConnectivityResult {
            p_c: p_cov * p_nl,
            p_cov,
            p_nl,
        })
    }

    /// Along-road offsets `[x_lo, x_hi]` of the serving base stations whose
    /// footprint is at most `u`; `None` when no footprint is that short.
    ///
    /// The footprint first shrinks slightly as the base station moves away
    /// from the road edge and grows afterwards, so the set is an interval
    /// that only touches the edge once `u >= d(W)`.
    fn footprint_offsets(&self, u: f64) -> Result<Option<(f64, f64)>, AnalyticError> {
        let w = self.w();
        let psi = self.cfg.bs_antenna.beamwidth;
        let r_min = footprint_minimum_radius(w, psi);
        if u < covered_distance(r_min, w, psi) {
            return Ok(None);
        }
        let r_hi = find_root_decreasing(|r| covered_distance(r, w, psi) - u, r_min, 2.0 * w + u)?;
        let r_lo = if u >= covered_distance(w, w, psi) {
            w
        } else {
            find_root_decreasing(|r| u - covered_distance(r, w, psi), w, r_min)?
        };
        Ok(Some((projection(r_lo, w), projection(r_hi, w))))
    }

    /// Smallest footprint length over all serving distances, m.
    fn shortest_footprint(&self) -> f64 {
        let psi = self.cfg.bs_antenna.beamwidth;
        covered_distance(footprint_minimum_radius(self.w(), psi), self.w(), psi)
    }

    /// CDF of the footprint length `d(r)` of the serving beam.
    pub fn covered_distance_cdf(&self, u: f64) -> Result<f64, AnalyticError> {
        if !(u >= 0.0) {
            return Err(ModelError::domain("covered distance", u, "u >= 0").into());
        }
        if u.is_infinite() {
            return Ok(self.serving.association[0] + self.serving.association[1]);
        }
        let Some((x_lo, x_hi)) = self.footprint_offsets(u)? else {
            return Ok(0.0);
        };
        let mut total = 0.0;
        for state in LinkState::ALL {
            total += self.serving_integral(state, x_lo, x_hi, |_| 1.0)?.value;
        }
        Ok(clamp_probability("covered-distance", total))
    }

    /// Expected time within a slot before the vehicle leaves the beam, s.
    pub fn expected_comm_time(&self) -> Result<f64, AnalyticError> {
        let slot = self.cfg.slot;
        let v = self.cfg.speed;
        let travel = self.cfg.slot_travel();
        if v == 0.0 {
            return Ok(slot);
        }
        let f_travel = self.covered_distance_cdf(travel)?;
        if f_travel == 0.0 {
            return Ok(slot);
        }
        let p_nl = self.no_leave_probability()?;
        let d_min = self.shortest_footprint().min(travel);
        // F_d vanishes below the shortest footprint, so that stretch
        // contributes F_d(VT) per meter
        let flat = d_min * f_travel;
        let mut err = None;
        let tail = integrate_finite(
            |u| match self.covered_distance_cdf(u) {
                Ok(f) => f_travel - f,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            },
            d_min,
            travel,
            &self.quad,
        );
        if let Some(e) = err {
            return Err(e);
        }
        let inner = flat + tail?.value;
        let t = (1.0 - p_nl) * inner / (v * f_travel) + p_nl * slot;
        Ok(t.clamp(0.0, slot))
    }

    /// Average throughput `E[rate] E[T_comm] / T_S`, bit/s.
    pub fn average_throughput(&self) -> Result<f64, AnalyticError> {
        let rate = self.average_rate()?;
        if rate == 0.0 {
            return Ok(0.0);
        }
        Ok(rate * self.expected_comm_time()? / self.cfg.slot)
    }
}
