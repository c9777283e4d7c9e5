use core::cell::Cell;

use super::{clamp_probability, AnalyticError, AnalyticModel, PANEL_SCALE};
use crate::model::geometry::projection;
use crate::model::{LinkState, ModelError};
use crate::numerics::{integrate_finite, integrate_semi_infinite_with_scale, QuadratureSpec};

/// SINR coverage split by the state of the serving base station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageResult {
    pub p_cov: f64,
    pub los_term: f64,
    pub nlos_term: f64,
    pub abs_error: f64,
}

impl CoverageResult {
    pub fn term(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.los_term,
            LinkState::Nlos => self.nlos_term,
        }
    }
}

/// Holds the first error raised inside an integrand so the quadrature can be
/// aborted with a NaN and the real cause reported afterwards.
struct ErrorSlot(Cell<Option<AnalyticError>>);

impl ErrorSlot {
    fn new() -> Self {
        ErrorSlot(Cell::new(None))
    }

    fn unwrap_or_nan(&self, r: Result<f64, AnalyticError>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                if self.0.get().is_none() {
                    self.0.set(Some(e));
                }
                f64::NAN
            }
        }
    }

    fn finish<T>(&self, r: Result<T, AnalyticError>) -> Result<T, AnalyticError> {
        match self.0.take() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

/// Rate integrands below this coverage are treated as zero.
const RATE_TAIL: f64 = 1e-8;
const RATE_INNER_TOL: f64 = 1e-7;
const RATE_OUTER_TOL: f64 = 1e-6;

impl AnalyticModel {
    /// Laplace functional `E[exp(-t I)]` of the interference from `interferer`
    /// base stations when the serving base station is `serving` at radial
    /// distance `r`.
    pub fn interference_laplace(
        &self,
        serving: LinkState,
        interferer: LinkState,
        t: f64,
        r: f64,
    ) -> Result<f64, AnalyticError> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(ModelError::domain("t", t, "t >= 0").into());
        }
        let x = self.check_radius(r)?;
        self.laplace_x(serving, interferer, t, x)
    }

    /// [`interference_laplace`](Self::interference_laplace) with the serving
    /// base station at along-road offset `x`.
    pub(crate) fn laplace_x(
        &self,
        serving: LinkState,
        interferer: LinkState,
        t: f64,
        x: f64,
    ) -> Result<f64, AnalyticError> {
        let lam = self.lambda();
        if t == 0.0 || lam == 0.0 {
            return Ok(1.0);
        }
        let w = self.w();
        let pl = &self.cfg.pathloss;
        let x0 = if serving == interferer {
            x
        } else {
            let r = libm::hypot(x, w);
            projection(pl.equal_distance(serving, r), w)
        };
        let params = pl.params(interferer);
        let gains = self.cfg.interferer_gains();
        let scale = self.cfg.rayleigh_mu * t * params.unit_gain;
        let integrand = |u: f64| {
            let p = pl.state_probability(interferer, u);
            if p == 0.0 {
                return 0.0;
            }
            let v = libm::hypot(u, w);
            let k = scale * libm::pow(v, -params.exponent);
            // 1 - E_Δ[1 / (1 + k Δ)] = E_Δ[k Δ / (1 + k Δ)]
            let mut s = 0.0;
            for (g, q) in gains.outcomes {
                if q > 0.0 {
                    s += q * k * g / (1.0 + k * g);
                }
            }
            p * s
        };
        let i = integrate_semi_infinite_with_scale(integrand, x0, PANEL_SCALE, &self.quad)?;
        Ok(libm::exp(-2.0 * lam * i.value))
    }

    /// SINR coverage `P[SINR > gamma]` at a linear threshold `gamma >= 0`.
    pub fn coverage_probability(&self, gamma: f64) -> Result<CoverageResult, AnalyticError> {
        self.coverage_with(gamma, &self.quad)
    }

    /// Coverage at the configured threshold.
    pub fn coverage(&self) -> Result<CoverageResult, AnalyticError> {
        self.coverage_probability(self.cfg.sinr_threshold)
    }

    fn coverage_with(
        &self,
        gamma: f64,
        quad: &QuadratureSpec,
    ) -> Result<CoverageResult, AnalyticError> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(ModelError::domain("SINR threshold", gamma, "gamma >= 0").into());
        }
        let model = if quad == &self.quad {
            None
        } else {
            Some(AnalyticModel {
                cfg: self.cfg.clone(),
                quad: *quad,
                serving: self.serving,
            })
        };
        let m = model.as_ref().unwrap_or(self);
        let noise = m.cfg.normalized_noise();
        let delta1 = m.cfg.alignment_gain();
        let mu = m.cfg.rayleigh_mu;
        let w = m.w();
        let mut terms = [0.0; 2];
        let mut abs_error = 0.0;
        for state in LinkState::ALL {
            if gamma == 0.0 {
                terms[state.index()] = m.association_probability(state);
                continue;
            }
            let params = m.cfg.pathloss.params(state);
            let slot = ErrorSlot::new();
            let weight = |x: f64| {
                let r = libm::hypot(x, w);
                let s = gamma * libm::pow(r, params.exponent) / (mu * delta1 * params.unit_gain);
                let noise_factor = libm::exp(-noise * s);
                if noise_factor == 0.0 {
                    return 0.0;
                }
                let lap = m.laplace_x(state, LinkState::Los, s, x).and_then(|a| {
                    if a == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(a * m.laplace_x(state, LinkState::Nlos, s, x)?)
                });
                noise_factor * slot.unwrap_or_nan(lap)
            };
            let i = slot.finish(m.serving_integral(state, 0.0, f64::INFINITY, weight))?;
            terms[state.index()] = i.value.max(0.0);
            abs_error += i.abs_error;
        }
        let p_cov = clamp_probability("coverage", terms[0] + terms[1]);
        Ok(CoverageResult {
            p_cov,
            los_term: terms[0],
            nlos_term: terms[1],
            abs_error,
        })
    }

    /// Ergodic rate `W/ln 2 ∫_0^∞ P_cov(e^t - 1) dt`, bit/s.
    pub fn average_rate(&self) -> Result<f64, AnalyticError> {
        if self.lambda() == 0.0 {
            return Ok(0.0);
        }
        // the rate integrand only needs coverage to ~1e-7; the outer sum
        // dominates the cost otherwise
        let quad = QuadratureSpec {
            rel_tol: self.quad.rel_tol.max(RATE_INNER_TOL),
            tail_cutoff_probability: self.quad.tail_cutoff_probability.max(RATE_INNER_TOL),
            ..self.quad
        };
        let p = |t: f64| -> Result<f64, AnalyticError> {
            Ok(self.coverage_with(libm::expm1(t), &quad)?.p_cov)
        };
        let mut t_max = 2.0;
        while p(t_max)? >= RATE_TAIL {
            t_max *= 2.0;
            if t_max > 1024.0 {
                return Err(crate::numerics::NumericsError::Divergent { reached: t_max }.into());
            }
        }
        let outer = QuadratureSpec {
            rel_tol: self.quad.rel_tol.max(RATE_OUTER_TOL),
            ..self.quad
        };
        let slot = ErrorSlot::new();
        let i = integrate_finite(|t| slot.unwrap_or_nan(p(t)), 0.0, t_max, &outer)
            .map_err(AnalyticError::from);
        let i = slot.finish(i)?;
        Ok(self.cfg.bandwidth / core::f64::consts::LN_2 * i.value)
    }
}
