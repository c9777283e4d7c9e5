//! Monte Carlo oracle: samples deployments, associates by minimum path loss,
//! draws fading and interferer beam gains and records the slot outcome.
//!
//! Trials are grouped into fixed-size chunks. Chunk `k` draws from stream `k`
//! of a ChaCha8 generator keyed by the seed, so chunks can run on any number
//! of workers and still merge into bit-identical estimates when combined in
//! chunk order.

mod deployment;
mod stats;
mod trial;

use alloc::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use deployment::{
    associate, sample_deployment, simulation_window, BaseStation, Deployment, Side,
};
pub use stats::{Metric, MetricEstimate, Moments, Provenance, TrialAccumulator};
pub use trial::{measure_sinr, run_trial, sample_interference, simulate_slot, TrialRecord};

use crate::model::{LinkState, ScenarioConfig};

/// Trials per chunk. Part of the reproducibility contract: changing it
/// changes every seeded estimate.
pub const CHUNK_SIZE: u64 = 256;

/// Generator for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Number of chunks covering `trials`.
pub fn chunk_count(trials: u64) -> u64 {
    trials.div_ceil(CHUNK_SIZE)
}

/// Runs chunk `chunk` of a `trials`-trial run.
pub fn run_chunk(cfg: &ScenarioConfig, trials: u64, seed: u64, chunk: u64) -> TrialAccumulator {
    let start = chunk * CHUNK_SIZE;
    let n = CHUNK_SIZE.min(trials.saturating_sub(start));
    let window = simulation_window(cfg);
    let mut rng = chunk_rng(seed, chunk);
    let mut scratch = Deployment::default();
    let mut acc = TrialAccumulator::default();
    for _ in 0..n {
        let rec = run_trial(cfg, window, &mut rng, &mut scratch);
        record(cfg, &rec, &mut acc);
    }
    acc
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn record(cfg: &ScenarioConfig, rec: &TrialRecord, acc: &mut TrialAccumulator) {
    acc.trials += 1;
    let aligned = rec.stays_aligned(cfg);
    acc.push(Metric::Coverage, indicator(rec.covered));
    if rec.covered {
        acc.push(Metric::NoLeave, indicator(aligned));
    }
    acc.push(Metric::Connectivity, indicator(rec.covered && aligned));
    acc.push(
        Metric::LosAssociation,
        indicator(rec.serving_state == Some(LinkState::Los)),
    );
    acc.push(
        Metric::NlosAssociation,
        indicator(rec.serving_state == Some(LinkState::Nlos)),
    );
    acc.push(Metric::Rate, rec.capacity);
    acc.push(Metric::Throughput, rec.throughput);
    if rec.serving_index.is_some() {
        acc.push(Metric::NoLeaveUnconditional, indicator(aligned));
        acc.push(Metric::CommTime, rec.t_comm);
    }
}

/// Estimates of every applicable metric from one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub trials: u64,
    pub seed: u64,
    pub estimates: BTreeMap<Metric, MetricEstimate>,
}

impl MonteCarloReport {
    pub fn from_accumulator(acc: &TrialAccumulator, seed: u64) -> Self {
        let estimates = Metric::ALL
            .into_iter()
            .filter_map(|m| acc.estimate(m).map(|e| (m, e)))
            .collect();
        MonteCarloReport {
            trials: acc.trials,
            seed,
            estimates,
        }
    }

    pub fn get(&self, metric: Metric) -> Option<MetricEstimate> {
        self.estimates.get(&metric).copied()
    }
}

/// Sequential Monte Carlo run; chunk results merge in chunk order.
pub fn run_monte_carlo(cfg: &ScenarioConfig, trials: u64, seed: u64) -> MonteCarloReport {
    let mut acc = TrialAccumulator::default();
    for chunk in 0..chunk_count(trials) {
        acc.merge(&run_chunk(cfg, trials, seed, chunk));
    }
    MonteCarloReport::from_accumulator(&acc, seed)
}
