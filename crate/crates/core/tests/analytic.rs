use std::f64::consts::LN_2;

use mmv2x_core::analytic::AnalyticModel;
use mmv2x_core::model::{
    max_covered_distance, road_projection, Blockage, LinkState, PathLossModel, PathLossParams,
};
use mmv2x_core::numerics::{integrate_finite, integrate_semi_infinite_with_scale, QuadratureSpec};
use mmv2x_core::{BeamPreset, ScenarioConfig};
use proptest::prelude::*;

const W: f64 = 7.4;

fn urban(per_km: f64) -> ScenarioConfig {
    ScenarioConfig::urban(BeamPreset::Deg30).with_density_per_km(per_km)
}

fn rural(per_km: f64) -> ScenarioConfig {
    ScenarioConfig::rural(BeamPreset::Deg30).with_density_per_km(per_km)
}

/// Equal path loss in both states and a distance-free LOS probability of 1/2.
fn symmetric(per_km: f64) -> ScenarioConfig {
    let p = PathLossParams {
        exponent: 2.5,
        unit_gain: 1e-7,
    };
    let mut cfg = rural(per_km);
    cfg.pathloss = PathLossModel {
        blockage: Blockage::Rural {
            obstacle_density: LN_2,
            obstacle_length: 1.0,
        },
        los: p,
        nlos: p,
    };
    cfg
}

fn model(cfg: &ScenarioConfig) -> AnalyticModel {
    AnalyticModel::new(cfg).unwrap()
}

/// `∫_W^∞ g(r) dr` in the radial coordinate, via `r = W + s^2` so the
/// `1/sqrt(r - W)` edge singularity disappears. Independent of the along-road
/// integration used by the model.
fn radial_integral(g: impl Fn(f64) -> f64) -> f64 {
    let spec = QuadratureSpec::default();
    integrate_semi_infinite_with_scale(
        |s: f64| {
            if s == 0.0 {
                0.0
            } else {
                g(W + s * s) * 2.0 * s
            }
        },
        0.0,
        2.0,
        &spec,
    )
    .unwrap()
    .value
}

#[test]
fn rural_nearest_pdf_matches_footnote_form() {
    let cfg = rural(10.0);
    let m = model(&cfg);
    let p_l = (-0.222f64).exp();
    for (state, p) in [(LinkState::Los, p_l), (LinkState::Nlos, 1.0 - p_l)] {
        let lam = cfg.bs_density * p;
        for r in [7.5, 12.0, 100.0, 850.0] {
            let b = road_projection(r, W).unwrap();
            let closed = 2.0 * lam * r / b * (-2.0 * lam * b).exp();
            let got = m.nearest_pdf(state, r).unwrap();
            assert!(
                (got - closed).abs() <= 1e-10 * closed,
                "{state:?} {r}: {got} vs {closed}"
            );
        }
    }
    let f = m.nearest_pdf(LinkState::Los, 100.0).unwrap();
    assert!((f - 3.2513e-3).abs() < 1e-6, "{f}");
}

#[test]
fn obstacle_free_rural_is_full_density() {
    let mut cfg = rural(10.0);
    cfg.pathloss.blockage = Blockage::Rural {
        obstacle_density: 0.0,
        obstacle_length: 11.1,
    };
    let m = model(&cfg);
    let lam = cfg.bs_density;
    let b = road_projection(40.0, W).unwrap();
    let closed = 2.0 * lam * 40.0 / b * (-2.0 * lam * b).exp();
    assert!((m.nearest_pdf(LinkState::Los, 40.0).unwrap() - closed).abs() < 1e-15);
    assert!((m.association_probability(LinkState::Los) - 1.0).abs() < 1e-9);
    assert!(m.association_probability(LinkState::Nlos) < 1e-9);
}

#[test]
fn nearest_pdf_rejects_road_edge() {
    let m = model(&urban(10.0));
    assert!(m.nearest_pdf(LinkState::Los, W).is_err());
    assert!(m.serving_pdf(LinkState::Nlos, 3.0).is_err());
}

#[test]
fn urban_nearest_masses() {
    for per_km in [0.2, 10.0, 45.0] {
        let cfg = urban(per_km);
        let m = model(&cfg);
        let los = radial_integral(|r| m.nearest_pdf(LinkState::Los, r).unwrap());
        let defect = 1.0 - (-2.0 * cfg.bs_density / 0.0149).exp();
        assert!((los - defect).abs() < 1e-6, "{per_km}: {los} vs {defect}");
        let nlos = radial_integral(|r| m.nearest_pdf(LinkState::Nlos, r).unwrap());
        assert!((nlos - 1.0).abs() < 1e-6, "{per_km}: {nlos}");
    }
}

#[test]
fn serving_masses_equal_association() {
    for cfg in [urban(0.2), urban(10.684), urban(44.758), rural(10.684)] {
        let m = model(&cfg);
        let mut total = 0.0;
        for state in LinkState::ALL {
            let mass = radial_integral(|r| m.serving_pdf(state, r).unwrap());
            let p = m.association_probability(state);
            assert!((mass - p).abs() < 1e-6, "{state:?}: {mass} vs {p}");
            total += mass;
        }
        assert!((total - 1.0).abs() < 1e-6, "{total}");
        let p_sum =
            m.association_probability(LinkState::Los) + m.association_probability(LinkState::Nlos);
        assert!((p_sum - 1.0).abs() < 1e-6);
    }
}

#[test]
fn symmetric_model_splits_evenly() {
    let m = model(&symmetric(10.0));
    assert!((m.association_probability(LinkState::Los) - 0.5).abs() < 1e-9);
    assert!((m.association_probability(LinkState::Nlos) - 0.5).abs() < 1e-9);
    for r in [8.0, 30.0, 200.0] {
        let l = m.serving_pdf(LinkState::Los, r).unwrap();
        let n = m.serving_pdf(LinkState::Nlos, r).unwrap();
        assert!((l - n).abs() <= 1e-14 * l.max(1e-300));
    }
}

#[test]
fn urban_los_association_grows_with_density() {
    let mut last = 0.0;
    for per_km in [0.2, 2.0, 10.0, 25.0, 45.0] {
        let p = model(&urban(per_km)).association_probability(LinkState::Los);
        assert!(p > last, "{per_km}: {p} <= {last}");
        last = p;
    }
}

#[test]
fn laplace_trivial_cases() {
    let m = model(&urban(10.0));
    for (i, j) in [
        (LinkState::Los, LinkState::Nlos),
        (LinkState::Nlos, LinkState::Nlos),
    ] {
        assert_eq!(m.interference_laplace(i, j, 0.0, 100.0).unwrap(), 1.0);
    }
    let empty = model(&urban(0.0));
    assert_eq!(
        empty
            .interference_laplace(LinkState::Los, LinkState::Los, 1e12, 50.0)
            .unwrap(),
        1.0
    );
    assert!(m
        .interference_laplace(LinkState::Los, LinkState::Los, -1.0, 50.0)
        .is_err());
    let l = m
        .interference_laplace(LinkState::Los, LinkState::Nlos, 1e10, 100.0)
        .unwrap();
    assert!(l > 0.0 && l < 1.0);
}

#[test]
fn coverage_limits() {
    let m = model(&urban(10.684));
    let c = m.coverage_probability(1e-7).unwrap();
    assert!((c.p_cov - 1.0).abs() < 1e-4, "{c:?}");
    assert_eq!(c.p_cov, (c.los_term + c.nlos_term).clamp(0.0, 1.0));
    let sparse = model(&urban(1e-4));
    assert!(sparse.coverage().unwrap().p_cov < 1e-3);
    assert_eq!(model(&urban(0.0)).coverage().unwrap().p_cov, 0.0);
    assert!(m.coverage_probability(-1.0).is_err());
}

#[test]
fn coverage_decreases_with_threshold() {
    let m = model(&urban(10.684));
    let mut last = 1.0;
    for db in [-20.0, -5.0, 0.0, 10.0, 30.0] {
        let p = m.coverage_probability(10f64.powf(db / 10.0)).unwrap().p_cov;
        assert!(p <= last, "{db}: {p}");
        last = p;
    }
}

#[test]
fn stationary_vehicle_never_leaves() {
    let cfg = urban(10.684).with_speed_kmh(0.0);
    let m = model(&cfg);
    assert_eq!(m.no_leave_probability().unwrap(), 1.0);
    assert_eq!(m.expected_comm_time().unwrap(), cfg.slot);
}

#[test]
fn covered_distance_cdf_edges() {
    let cfg = urban(10.684);
    let m = model(&cfg);
    let d_w = max_covered_distance(W, W, cfg.bs_antenna.beamwidth).unwrap();
    assert_eq!(m.covered_distance_cdf(0.5 * d_w).unwrap(), 0.0);
    assert!((m.covered_distance_cdf(f64::INFINITY).unwrap() - 1.0).abs() < 1e-6);
    assert!((m.covered_distance_cdf(1e7).unwrap() - 1.0).abs() < 1e-6);
    assert!(m.covered_distance_cdf(-1.0).is_err());
}

#[test]
fn cdf_at_slot_travel_complements_no_leave() {
    for cfg in [
        urban(0.2),
        urban(10.684),
        urban(44.758).with_slot(1.0),
        rural(10.684).with_speed_kmh(30.0),
    ] {
        let m = model(&cfg);
        let f = m.covered_distance_cdf(cfg.slot_travel()).unwrap();
        let p = m.no_leave_probability().unwrap();
        assert!((f - (1.0 - p)).abs() < 1e-6, "{f} vs {p}");
    }
}

#[test]
fn comm_time_matches_truncated_footprint_mean() {
    // E[T] = E[d 1{d <= VT}] / V + P_NL T, integrated directly over the
    // serving density instead of through the CDF
    for cfg in [
        urban(10.684),
        urban(2.821).with_slot(1.0),
        rural(26.41).with_speed_kmh(130.0),
    ] {
        let m = model(&cfg);
        let psi = cfg.bs_antenna.beamwidth;
        let vt = cfg.slot_travel();
        let mut truncated = 0.0;
        for state in LinkState::ALL {
            truncated += radial_integral(|r| {
                let d = max_covered_distance(r, W, psi).unwrap();
                if d <= vt {
                    d * m.serving_pdf(state, r).unwrap()
                } else {
                    0.0
                }
            });
        }
        let p_nl = m.no_leave_probability().unwrap();
        let oracle = truncated / cfg.speed + p_nl * cfg.slot;
        let got = m.expected_comm_time().unwrap();
        assert!((got - oracle).abs() < 1e-6 * cfg.slot, "{got} vs {oracle}");
        assert!(got > 0.0 && got <= cfg.slot);
    }
}

#[test]
fn connectivity_is_exact_product() {
    let m = model(&urban(10.684));
    let c = m.connectivity_probability().unwrap();
    assert_eq!(c.p_c, c.p_cov * c.p_nl);
}

#[test]
fn no_leave_orderings_over_table_grids() {
    let densities = [0.2, 2.821, 10.684, 26.41, 44.758];
    let speeds = [30.0, 60.0, 90.0, 100.0, 130.0];
    let slots = [0.1, 0.3, 0.5, 1.0];
    let p = |cfg: ScenarioConfig| model(&cfg).no_leave_probability().unwrap();
    let base = || urban(10.684);
    let series = |v: Vec<f64>| v.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    assert!(series(densities.iter().map(|&d| p(urban(d))).collect()));
    assert!(series(
        speeds
            .iter()
            .map(|&v| p(base().with_speed_kmh(v)))
            .collect()
    ));
    assert!(series(
        slots.iter().map(|&t| p(base().with_slot(t))).collect()
    ));
    let by_beam: Vec<f64> = BeamPreset::ALL
        .iter()
        .map(|&b| p(base().with_preset(b)))
        .collect();
    assert!(by_beam.windows(2).all(|w| w[1] >= w[0]), "{by_beam:?}");
}

#[test]
fn rate_and_throughput_identities() {
    let cfg = urban(10.684).with_speed_kmh(0.0);
    let m = model(&cfg);
    let rate = m.average_rate().unwrap();
    assert!(rate > 0.0 && rate < cfg.bandwidth * 20.0);
    assert_eq!(m.average_throughput().unwrap(), rate);
    let empty = model(&urban(0.0));
    assert_eq!(empty.average_rate().unwrap(), 0.0);
    assert_eq!(empty.average_throughput().unwrap(), 0.0);
}

#[test]
fn rate_matches_direct_threshold_integral() {
    // E[W log2(1 + SINR)] = W/ln2 ∫ P(SINR > γ) / (1 + γ) dγ, a different
    // substitution of the same tail formula
    let m = model(&urban(26.41));
    let spec = QuadratureSpec {
        rel_tol: 1e-6,
        ..QuadratureSpec::default()
    };
    let tail = integrate_finite(
        |u: f64| {
            let g = u * u;
            m.coverage_probability(g).unwrap().p_cov / (1.0 + g) * 2.0 * u
        },
        0.0,
        1e4,
        &spec,
    )
    .unwrap()
    .value;
    let direct = 1e9 / LN_2 * tail;
    let rate = m.average_rate().unwrap();
    assert!((rate - direct).abs() < 1e-5 * rate, "{rate} vs {direct}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn association_sums_to_one(per_km in 0.05f64..60.0, urban_model in any::<bool>()) {
        let cfg = if urban_model { urban(per_km) } else { rural(per_km) };
        let m = model(&cfg);
        let s = m.association_probability(LinkState::Los) + m.association_probability(LinkState::Nlos);
        prop_assert!((s - 1.0).abs() < 1e-6, "{}", s);
    }

    #[test]
    fn no_leave_is_a_probability(per_km in 0.05f64..60.0, kmh in 0.0f64..200.0, slot in 0.01f64..2.0) {
        let cfg = urban(per_km).with_speed_kmh(kmh).with_slot(slot);
        let p = model(&cfg).no_leave_probability().unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }
}

#[test]
fn no_leave_counts_both_footprint_branches() {
    // slot travel between the smallest footprint and the road-edge one: the
    // leaving set is an interval away from the road edge
    let mut cfg = urban(10.684);
    let psi = cfg.bs_antenna.beamwidth;
    let travel = 1.97;
    assert!(travel < max_covered_distance(W, W, psi).unwrap());
    cfg.speed = travel / cfg.slot;
    let m = model(&cfg);
    let mut oracle = 0.0;
    for state in LinkState::ALL {
        oracle += radial_integral(|r| {
            if max_covered_distance(r, W, psi).unwrap() > travel {
                m.serving_pdf(state, r).unwrap()
            } else {
                0.0
            }
        });
    }
    let p = m.no_leave_probability().unwrap();
    assert!((p - oracle).abs() < 1e-6, "{p} vs {oracle}");
    assert!(p < 1.0);
    let f = m.covered_distance_cdf(travel).unwrap();
    assert!((f - (1.0 - p)).abs() < 1e-6);
}
