//! Analytic evaluation of the serving-distance law, SINR coverage,
//! beam-alignment survival, communication time, rate and throughput.
//!
//! Every integral over the distance `r` to a base station is computed in the
//! along-road coordinate `x = sqrt(r^2 - W^2)`: the densities then lose their
//! integrable `r / b(r)` singularity at the road edge.

mod coverage;
mod mobility;

pub use coverage::CoverageResult;
pub use mobility::ConnectivityResult;

use crate::model::geometry::projection;
use crate::model::{ConfigError, LinkState, ModelError, ScenarioConfig};
use crate::numerics::{
    integrate_finite, integrate_panels, integrate_semi_infinite_with_scale, Integral,
    NumericsError, QuadratureSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Association probabilities of the two states, cached at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServingDistribution {
    pub association: [f64; 2],
    pub abs_error: f64,
}

impl ServingDistribution {
    pub fn probability(&self, state: LinkState) -> f64 {
        self.association[state.index()]
    }
}

/// Analytic evaluator for one scenario.
#[derive(Debug, Clone)]
pub struct AnalyticModel {
    cfg: ScenarioConfig,
    quad: QuadratureSpec,
    serving: ServingDistribution,
}

/// Initial panel width of semi-infinite integrals, m.
const PANEL_SCALE: f64 = 50.0;

impl AnalyticModel {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self, AnalyticError> {
        Self::with_quadrature(cfg, QuadratureSpec::default())
    }

    pub fn with_quadrature(
        cfg: &ScenarioConfig,
        quad: QuadratureSpec,
    ) -> Result<Self, AnalyticError> {
        cfg.validate()?;
        quad.validate()?;
        let mut model = AnalyticModel {
            cfg: cfg.clone(),
            quad,
            serving: ServingDistribution {
                association: [0.0; 2],
                abs_error: 0.0,
            },
        };
        let mut abs_error = 0.0;
        for state in LinkState::ALL {
            let i = model.serving_integral(state, 0.0, f64::INFINITY, |_| 1.0)?;
            model.serving.association[state.index()] = clamp_probability("association", i.value);
            abs_error += i.abs_error;
        }
        model.serving.abs_error = abs_error;
        Ok(model)
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    pub fn serving_distribution(&self) -> &ServingDistribution {
        &self.serving
    }

    /// Probability that the vehicle associates with a `state` base station.
    pub fn association_probability(&self, state: LinkState) -> f64 {
        self.serving.probability(state)
    }

    fn lambda(&self) -> f64 {
        self.cfg.bs_density
    }

    fn w(&self) -> f64 {
        self.cfg.half_width
    }

    /// Density in `x` of the nearest `state` base station.
    pub(crate) fn nearest_density_x(&self, state: LinkState, x: f64) -> f64 {
        let pl = &self.cfg.pathloss;
        let lam = self.lambda();
        2.0 * lam * pl.state_probability(state, x) * libm::exp(-2.0 * lam * pl.state_mass(state, x))
    }

    /// Probability that no base station of the other state beats a `state`
    /// base station at along-road offset `x`.
    pub(crate) fn void_probability(&self, state: LinkState, x: f64) -> f64 {
        let r = libm::hypot(x, self.w());
        let a = self.cfg.pathloss.equal_distance(state, r);
        let xo = projection(a, self.w());
        libm::exp(-2.0 * self.lambda() * self.cfg.pathloss.state_mass(state.other(), xo))
    }

    /// Density in `x` of a serving `state` base station (mass `P_state`).
    pub(crate) fn serving_density_x(&self, state: LinkState, x: f64) -> f64 {
        let f = self.nearest_density_x(state, x);
        if f == 0.0 {
            return 0.0;
        }
        f * self.void_probability(state, x)
    }

    /// Along-road offset where the exclusion interval of the other state
    /// opens, i.e. where `A_state(r) = W`. The serving density has a kink here.
    pub(crate) fn kink(&self, state: LinkState) -> Option<f64> {
        let r = self.cfg.pathloss.equal_distance(state.other(), self.w());
        let x = projection(r, self.w());
        (x > 0.0 && x.is_finite()).then_some(x)
    }

    fn check_radius(&self, r: f64) -> Result<f64, AnalyticError> {
        if !(r > self.w()) {
            return Err(ModelError::domain("serving distance", r, "r > W").into());
        }
        Ok(projection(r, self.w()))
    }

    /// Density in `r` of the nearest `state` base station.
    pub fn nearest_pdf(&self, state: LinkState, r: f64) -> Result<f64, AnalyticError> {
        let x = self.check_radius(r)?;
        Ok(self.nearest_density_x(state, x) * r / x)
    }

    /// Density in `r` of the serving base station being in `state` at `r`.
    pub fn serving_pdf(&self, state: LinkState, r: f64) -> Result<f64, AnalyticError> {
        let x = self.check_radius(r)?;
        Ok(self.serving_density_x(state, x) * r / x)
    }

    /// `∫_lo^hi serving_density_x(state, x) weight(x) dx`, `hi` may be infinite.
    pub(crate) fn serving_integral<F: FnMut(f64) -> f64>(
        &self,
        state: LinkState,
        lo: f64,
        hi: f64,
        mut weight: F,
    ) -> Result<Integral, AnalyticError> {
        if self.lambda() == 0.0 || lo >= hi {
            return Ok(Integral {
                value: 0.0,
                abs_error: 0.0,
            });
        }
        let f = |x: f64| {
            let d = self.serving_density_x(state, x);
            if d == 0.0 {
                0.0
            } else {
                d * weight(x)
            }
        };
        self.integrate_x(f, lo, hi, self.kink(state))
    }

    /// Integral over `[lo, hi)` in `x`, split at `brk` when it falls inside.
    pub(crate) fn integrate_x<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        lo: f64,
        hi: f64,
        brk: Option<f64>,
    ) -> Result<Integral, AnalyticError> {
        let mut total = Integral {
            value: 0.0,
            abs_error: 0.0,
        };
        let mut start = lo;
        if let Some(k) = brk.filter(|&k| k > lo && k < hi) {
            let head = integrate_finite(&mut f, lo, k, &self.quad)?;
            total.value += head.value;
            total.abs_error += head.abs_error;
            start = k;
        }
        let rest = if hi.is_infinite() {
            integrate_semi_infinite_with_scale(&mut f, start, PANEL_SCALE, &self.quad)?
        } else if hi - start > 4.0 * PANEL_SCALE {
            integrate_panels(&mut f, start, hi, PANEL_SCALE, &self.quad)?
        } else {
            integrate_finite(&mut f, start, hi, &self.quad)?
        };
        total.value += rest.value;
        total.abs_error += rest.abs_error;
        Ok(total)
    }
}

/// Clamp a quadrature result that should be a probability into `[0, 1]`.
pub(crate) fn clamp_probability(what: &str, p: f64) -> f64 {
    let clamped = p.clamp(0.0, 1.0);
    if (clamped - p).abs() > 1e-6 {
        log::warn!("{what} probability {p} outside [0, 1], clamped");
    }
    clamped
}
