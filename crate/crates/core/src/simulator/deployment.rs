use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::model::geometry::projection;
use crate::model::{LinkState, ScenarioConfig};

/// Road edge a base station stands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseStation {
    /// Signed along-road offset from the vehicle, m.
    pub x: f64,
    pub side: Side,
    pub state: LinkState,
}

impl BaseStation {
    pub fn radial_distance(&self, half_width: f64) -> f64 {
        libm::hypot(self.x, half_width)
    }
}

/// One realization of the base-station process around the vehicle.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Deployment {
    pub stations: Vec<BaseStation>,
}

/// Total road length simulated around the vehicle, m.
///
/// At least the configured road length, and at least 20 times the distance
/// that contains the nearest base station with probability 0.99 or any
/// base station of the other state that could beat it.
pub fn simulation_window(cfg: &ScenarioConfig) -> f64 {
    if cfg.bs_density == 0.0 {
        return cfg.road_length;
    }
    let w = cfg.half_width;
    let x_q = libm::log(100.0) / (2.0 * cfg.bs_density);
    let r_q = libm::hypot(x_q, w);
    let guard = LinkState::ALL
        .iter()
        .map(|&s| cfg.pathloss.equal_distance(s, r_q))
        .fold(r_q, f64::max);
    cfg.road_length.max(20.0 * projection(guard, w).max(x_q))
}

/// Samples a deployment over `[-window/2, window/2]` into `out`.
///
/// Poisson count, uniform offsets, fair-coin road side, and LOS marks drawn
/// independently with the LOS probability at each along-road offset.
pub fn sample_deployment<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    window: f64,
    rng: &mut R,
    out: &mut Deployment,
) {
    out.stations.clear();
    let mean = cfg.bs_density * window;
    if mean <= 0.0 {
        return;
    }
    let count = Poisson::new(mean)
        .expect("positive finite mean")
        .sample(rng) as usize;
    out.stations.reserve(count);
    let half = 0.5 * window;
    for _ in 0..count {
        let x = (rng.random::<f64>() - 0.5) * window;
        let side = if rng.random::<bool>() {
            Side::Upper
        } else {
            Side::Lower
        };
        let p_los = cfg.pathloss.los_probability(x.abs().min(half));
        let state = if rng.random::<f64>() < p_los {
            LinkState::Los
        } else {
            LinkState::Nlos
        };
        out.stations.push(BaseStation { x, side, state });
    }
}

/// Index of the base station with the largest path-loss gain.
///
/// Ties go to the smaller radial distance, then to the lower index. `None`
/// for an empty deployment.
pub fn associate(dep: &Deployment, cfg: &ScenarioConfig) -> Option<usize> {
    let w = cfg.half_width;
    let mut best: Option<(usize, f64, f64)> = None;
    for (k, bs) in dep.stations.iter().enumerate() {
        let r = bs.radial_distance(w);
        let g = cfg.pathloss.gain(bs.state, r);
        let better = match best {
            None => true,
            Some((_, bg, br)) => g > bg || (g == bg && r < br),
        };
        if better {
            best = Some((k, g, r));
        }
    }
    best.map(|(k, _, _)| k)
}
