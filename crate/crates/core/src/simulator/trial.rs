use rand::Rng;
use rand_distr::{Distribution, Exp};

use super::deployment::{associate, sample_deployment, Deployment};
use crate::model::geometry::covered_distance;
use crate::model::{sinr, LinkState, ScenarioConfig};

/// Outcome of one simulated slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub serving_index: Option<usize>,
    pub serving_state: Option<LinkState>,
    /// Radial distance to the serving base station, m (infinite if none).
    pub serving_distance: f64,
    pub sinr: f64,
    pub covered: bool,
    /// `W log2(1 + SINR)` regardless of coverage, bit/s.
    pub capacity: f64,
    /// Capacity when covered, otherwise zero.
    pub rate: f64,
    /// Beam footprint length `d(r)`, m.
    pub covered_distance: f64,
    /// Aligned time within the slot, s.
    pub t_comm: f64,
    pub throughput: f64,
}

impl TrialRecord {
    fn empty(slot: f64) -> Self {
        TrialRecord {
            serving_index: None,
            serving_state: None,
            serving_distance: f64::INFINITY,
            sinr: 0.0,
            covered: false,
            capacity: 0.0,
            rate: 0.0,
            covered_distance: 0.0,
            t_comm: slot,
            throughput: 0.0,
        }
    }

    /// Whether the vehicle stays in the beam footprint for the whole slot.
    pub fn stays_aligned(&self, cfg: &ScenarioConfig) -> bool {
        self.serving_index.is_some() && self.covered_distance > cfg.slot_travel()
    }
}

/// Exponential fading draw with mean `mu`.
fn fading<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> f64 {
    mu * Exp::new(1.0).expect("unit rate").sample(rng)
}

/// SINR at the vehicle served by `serving`, with fresh fading and beam
/// gains for every interferer.
pub fn measure_sinr<R: Rng + ?Sized>(
    dep: &Deployment,
    serving: usize,
    cfg: &ScenarioConfig,
    rng: &mut R,
) -> f64 {
    let w = cfg.half_width;
    let gains = cfg.interferer_gains();
    let mu = cfg.rayleigh_mu;
    let bs = dep.stations[serving];
    let signal_pl = cfg.pathloss.gain(bs.state, bs.radial_distance(w));
    let h = fading(mu, rng);
    let mut interference = 0.0;
    for (k, other) in dep.stations.iter().enumerate() {
        if k == serving {
            continue;
        }
        let hk = fading(mu, rng);
        let g = gains.quantile(rng.random::<f64>());
        interference += hk * g * cfg.pathloss.gain(other.state, other.radial_distance(w));
    }
    sinr(
        h,
        cfg.alignment_gain(),
        signal_pl,
        interference,
        cfg.normalized_noise(),
    )
}

/// Slot outcome for a measured SINR at serving distance `r`.
pub fn simulate_slot(
    cfg: &ScenarioConfig,
    serving_index: usize,
    serving_state: LinkState,
    r: f64,
    sinr: f64,
) -> TrialRecord {
    let covered = sinr > cfg.sinr_threshold;
    let capacity = cfg.bandwidth * libm::log2(1.0 + sinr);
    let rate = if covered { capacity } else { 0.0 };
    let d = covered_distance(r, cfg.half_width, cfg.bs_antenna.beamwidth);
    let t_comm = if cfg.speed == 0.0 {
        cfg.slot
    } else {
        (d / cfg.speed).min(cfg.slot)
    };
    TrialRecord {
        serving_index: Some(serving_index),
        serving_state: Some(serving_state),
        serving_distance: r,
        sinr,
        covered,
        capacity,
        rate,
        covered_distance: d,
        t_comm,
        throughput: rate * (t_comm / cfg.slot).min(1.0),
    }
}

/// One full trial: deployment, association, SINR and slot outcome.
pub fn run_trial<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    window: f64,
    rng: &mut R,
    scratch: &mut Deployment,
) -> TrialRecord {
    sample_deployment(cfg, window, rng, scratch);
    let Some(k) = associate(scratch, cfg) else {
        return TrialRecord::empty(cfg.slot);
    };
    let s = measure_sinr(scratch, k, cfg, rng);
    let bs = scratch.stations[k];
    simulate_slot(cfg, k, bs.state, bs.radial_distance(cfg.half_width), s)
}

/// Aggregate interference from `interferer` base stations when a `serving`
/// base station at radial distance `r` is the one the vehicle associates
/// with. Base stations that would beat it are removed, which is exactly the
/// conditioning on the association event.
pub fn sample_interference<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    serving: LinkState,
    interferer: LinkState,
    r: f64,
    window: f64,
    rng: &mut R,
    scratch: &mut Deployment,
) -> f64 {
    sample_deployment(cfg, window, rng, scratch);
    let w = cfg.half_width;
    let threshold = cfg.pathloss.gain(serving, r);
    let gains = cfg.interferer_gains();
    let mut total = 0.0;
    for bs in &scratch.stations {
        if bs.state != interferer {
            continue;
        }
        let g = cfg.pathloss.gain(bs.state, bs.radial_distance(w));
        if g >= threshold {
            continue;
        }
        let h = fading(cfg.rayleigh_mu, rng);
        total += h * gains.quantile(rng.random::<f64>()) * g;
    }
    total
}
