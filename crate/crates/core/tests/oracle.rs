//! Analytic results against the Monte Carlo oracle.

use mmv2x_core::analytic::AnalyticModel;
use mmv2x_core::model::{road_projection, LinkState};
use mmv2x_core::numerics::{integrate_finite, QuadratureSpec};
use mmv2x_core::simulator::{
    chunk_rng, run_monte_carlo, run_trial, sample_interference, simulation_window, Deployment,
    Metric,
};
use mmv2x_core::{BeamPreset, PathLossModel, ScenarioConfig};

const TRIALS: u64 = 20_000;

fn urban(per_km: f64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::urban(BeamPreset::Deg30).with_density_per_km(per_km);
    cfg.road_length = 1.0;
    cfg
}

fn within(name: &str, analytic: f64, mean: f64, se: f64) {
    let z = (mean - analytic) / se;
    assert!(
        z.abs() <= 3.0,
        "{name}: analytic {analytic}, simulated {mean} ± {se} (z = {z:.2})"
    );
}

#[test]
fn probabilities_agree_with_simulation() {
    let mut rural = ScenarioConfig::rural(BeamPreset::Deg60)
        .with_density_per_km(26.41)
        .with_speed_kmh(60.0);
    rural.road_length = 1.0;
    for (k, cfg) in [urban(10.684), urban(2.821).with_slot(1.0), rural]
        .into_iter()
        .enumerate()
    {
        let m = AnalyticModel::new(&cfg).unwrap();
        let mc = run_monte_carlo(&cfg, TRIALS, 100 + k as u64);
        let est = |metric| mc.get(metric).unwrap();
        let c = m.connectivity_probability().unwrap();
        let p_l = est(Metric::LosAssociation);
        within(
            "P_L",
            m.association_probability(LinkState::Los),
            p_l.mean,
            p_l.std_error,
        );
        let cov = est(Metric::Coverage);
        within("P_cov", c.p_cov, cov.mean, cov.std_error);
        let nl = est(Metric::NoLeaveUnconditional);
        within("P_NL", c.p_nl, nl.mean, nl.std_error);
        let t = est(Metric::CommTime);
        within(
            "T_comm",
            m.expected_comm_time().unwrap(),
            t.mean,
            t.std_error,
        );
    }
}

#[test]
fn rate_agrees_with_simulation() {
    let cfg = urban(26.41);
    let m = AnalyticModel::new(&cfg).unwrap();
    let mc = run_monte_carlo(&cfg, TRIALS, 7);
    let r = mc.get(Metric::Rate).unwrap();
    within("rate", m.average_rate().unwrap(), r.mean, r.std_error);
}

#[test]
fn serving_distance_distribution_matches_histogram() {
    let cfg = urban(10.0);
    let m = AnalyticModel::new(&cfg).unwrap();
    let w = cfg.half_width;
    let window = simulation_window(&cfg);
    let n = 200_000;
    let mut rng = chunk_rng(31, 0);
    let mut scratch = Deployment::default();
    let mut samples: Vec<f64> = (0..n)
        .map(|_| run_trial(&cfg, window, &mut rng, &mut scratch).serving_distance)
        .collect();
    samples.sort_by(f64::total_cmp);
    let spec = QuadratureSpec::default();
    let cdf = |r: f64| -> f64 {
        let b = road_projection(r, w).unwrap();
        LinkState::ALL
            .iter()
            .map(|&s| {
                integrate_finite(
                    |x: f64| {
                        let rr = x.hypot(w);
                        if x == 0.0 {
                            0.0
                        } else {
                            m.serving_pdf(s, rr).unwrap() * x / rr
                        }
                    },
                    0.0,
                    b,
                    &spec,
                )
                .unwrap()
                .value
            })
            .sum()
    };
    let mut ks: f64 = 0.0;
    for q in 1..200 {
        let r = samples[q * n / 200];
        let empirical = samples.partition_point(|&s| s <= r) as f64 / n as f64;
        ks = ks.max((empirical - cdf(r)).abs());
    }
    assert!(ks < 0.005, "KS distance {ks}");
}

#[test]
fn interference_laplace_matches_empirical_mean() {
    let cfg = urban(10.0);
    let m = AnalyticModel::new(&cfg).unwrap();
    let window = simulation_window(&cfg);
    let delta1 = cfg.alignment_gain();
    for (serving, interferer, r, seed) in [
        (LinkState::Los, LinkState::Nlos, 100.0_f64, 1),
        (LinkState::Nlos, LinkState::Nlos, 60.0, 2),
    ] {
        let p = cfg.pathloss.params(serving);
        let t = cfg.sinr_threshold * r.powf(p.exponent) / (cfg.rayleigh_mu * delta1 * p.unit_gain);
        let analytic = m.interference_laplace(serving, interferer, t, r).unwrap();
        let mut rng = chunk_rng(seed, 0);
        let mut scratch = Deployment::default();
        let draws = 20_000;
        let vals: Vec<f64> = (0..draws)
            .map(|_| {
                (-t * sample_interference(
                    &cfg,
                    serving,
                    interferer,
                    r,
                    window,
                    &mut rng,
                    &mut scratch,
                ))
                .exp()
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / draws as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        within("laplace", analytic, mean, (var / draws as f64).sqrt());
    }
}

#[test]
fn rural_marginals_agree_and_joint_connectivity_is_lower() {
    let mut cfg = ScenarioConfig::table_one(PathLossModel::rural(), BeamPreset::Deg90)
        .with_density_per_km(2.821);
    cfg.road_length = 1.0;
    let m = AnalyticModel::new(&cfg).unwrap();
    let mc = run_monte_carlo(&cfg, TRIALS, 77);
    let cov = mc.get(Metric::Coverage).unwrap();
    within(
        "P_cov",
        m.coverage().unwrap().p_cov,
        cov.mean,
        cov.std_error,
    );
    let nl = mc.get(Metric::NoLeaveUnconditional).unwrap();
    within(
        "P_NL",
        m.no_leave_probability().unwrap(),
        nl.mean,
        nl.std_error,
    );
    // the analytic P_C multiplies the marginals; the simulated joint event
    // is rarer because long footprints come with long, weaker links
    let pc = mc.get(Metric::Connectivity).unwrap();
    let product = m.connectivity_probability().unwrap().p_c;
    assert!(
        pc.mean < product + 3.0 * pc.std_error,
        "{} vs {product}",
        pc.mean
    );
    let marginal_product = cov.mean * nl.mean;
    assert!(
        pc.mean <= marginal_product,
        "{} vs {marginal_product}",
        pc.mean
    );
}
