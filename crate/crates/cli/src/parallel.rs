use mmv2x_core::simulator::{chunk_count, run_chunk, MonteCarloReport, TrialAccumulator};
use mmv2x_core::ScenarioConfig;
use rayon::prelude::*;

/// Monte Carlo over all cores. Chunks run in parallel and merge in chunk
/// order, so the report is identical to the sequential driver's.
pub fn run_monte_carlo_parallel(cfg: &ScenarioConfig, trials: u64, seed: u64) -> MonteCarloReport {
    let parts: Vec<TrialAccumulator> = (0..chunk_count(trials))
        .into_par_iter()
        .map(|chunk| run_chunk(cfg, trials, seed, chunk))
        .collect();
    let mut acc = TrialAccumulator::default();
    for part in &parts {
        acc.merge(part);
    }
    MonteCarloReport::from_accumulator(&acc, seed)
}
