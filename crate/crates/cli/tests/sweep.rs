use mmv2x::sweep::{parse_metrics, parse_values, ANALYTIC, SIMULATE};
use mmv2x::{run_monte_carlo_parallel, run_sweep, Axis, Method, SweepSpec};
use mmv2x_core::simulator::{run_monte_carlo, Metric};
use mmv2x_core::{AnalyticModel, BeamPreset, ScenarioConfig};

fn spec(axis: Axis, values: Vec<f64>, metrics: Vec<Metric>, method: Method) -> SweepSpec {
    SweepSpec {
        base: ScenarioConfig::urban(BeamPreset::Deg30),
        axis,
        values,
        metrics,
        method,
        trials: 3000,
        seed: 11,
    }
}

#[test]
fn single_point_gives_single_row() {
    let s = spec(
        Axis::BsDensity,
        vec![10.0],
        vec![Metric::NoLeave],
        Method::Analytic,
    );
    let table = run_sweep(&s).unwrap();
    assert_eq!(table.rows.len(), 1);
    let r = &table.rows[0];
    assert_eq!((r.axis_name.as_str(), r.axis_value), ("bs_density", 10.0));
    assert_eq!((r.metric.as_str(), r.method.as_str()), ("P_NL", ANALYTIC));
    let direct = AnalyticModel::new(&s.base.clone().with_density_per_km(10.0))
        .unwrap()
        .no_leave_probability()
        .unwrap();
    assert_eq!(r.value, Some(direct));
    assert_eq!((r.trials, r.seed), (0, None));
}

#[test]
fn both_methods_pair_rows() {
    let s = spec(
        Axis::BsDensity,
        vec![5.0, 20.0],
        vec![Metric::LosAssociation, Metric::NoLeaveUnconditional],
        Method::Both,
    );
    let table = run_sweep(&s).unwrap();
    let keys: Vec<(f64, &str, &str)> = table
        .rows
        .iter()
        .map(|r| (r.axis_value, r.metric.as_str(), r.method.as_str()))
        .collect();
    assert_eq!(
        keys,
        [
            (5.0, "P_L", ANALYTIC),
            (5.0, "P_L", SIMULATE),
            (5.0, "P_NL_uncond", ANALYTIC),
            (5.0, "P_NL_uncond", SIMULATE),
            (20.0, "P_L", ANALYTIC),
            (20.0, "P_L", SIMULATE),
            (20.0, "P_NL_uncond", ANALYTIC),
            (20.0, "P_NL_uncond", SIMULATE),
        ]
    );
    for pair in table.rows.chunks(2) {
        let (a, m) = (&pair[0], &pair[1]);
        let z = (a.value.unwrap() - m.value.unwrap()) / m.std_error.unwrap();
        assert!(z.abs() < 4.0, "{} at {}: z = {z}", a.metric, a.axis_value);
        assert_eq!(m.seed, Some(11));
    }
}

#[test]
fn every_axis_changes_its_parameter() {
    let base = ScenarioConfig::urban(BeamPreset::Deg30);
    assert_eq!(Axis::Slot.apply(&base, 1.0).unwrap().slot, 1.0);
    assert!((Axis::Speed.apply(&base, 36.0).unwrap().speed - 10.0).abs() < 1e-12);
    assert_eq!(
        Axis::BeamwidthPreset.apply(&base, 90.0).unwrap().bs_antenna,
        BeamPreset::Deg90.antenna()
    );
    assert!((Axis::BsDensity.apply(&base, 2.0).unwrap().bs_density - 2e-3).abs() < 1e-15);
    assert!(Axis::BeamwidthPreset.apply(&base, 45.0).is_err());
    assert!(Axis::Slot.apply(&base, 0.0).is_err());
    assert!(Axis::BsDensity.apply(&base, -1.0).is_err());
    for axis in Axis::ALL {
        assert_eq!(Axis::from_name(axis.name()), Some(axis));
    }
}

#[test]
fn invalid_specs_are_rejected_up_front() {
    let m = vec![Metric::NoLeave];
    assert!(run_sweep(&spec(Axis::Slot, vec![], m.clone(), Method::Analytic)).is_err());
    assert!(run_sweep(&spec(Axis::Slot, vec![0.3], vec![], Method::Analytic)).is_err());
    assert!(run_sweep(&spec(
        Axis::Slot,
        vec![0.3, -1.0],
        m.clone(),
        Method::Analytic
    ))
    .is_err());
    let mut s = spec(Axis::Slot, vec![0.3], m, Method::Simulate);
    s.trials = 0;
    assert!(run_sweep(&s).is_err());
}

#[test]
fn point_failures_stay_in_row() {
    // Without base stations nothing is ever covered, so the conditional
    // alignment estimate has no samples.
    let s = spec(
        Axis::BsDensity,
        vec![0.0, 10.0],
        vec![Metric::NoLeave, Metric::Coverage],
        Method::Simulate,
    );
    let table = run_sweep(&s).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert!(table.rows[0].value.is_none());
    assert!(table.rows[0].error.is_some());
    assert_eq!(table.rows[1].value, Some(0.0));
    assert!(table.rows[2..]
        .iter()
        .all(|r| r.value.is_some() && r.error.is_none()));
}

#[test]
fn sweep_is_deterministic_apart_from_wall_time() {
    let s = spec(
        Axis::Speed,
        vec![30.0, 130.0],
        vec![Metric::Connectivity, Metric::Throughput],
        Method::Simulate,
    );
    let strip = |t: mmv2x::ResultTable| {
        t.rows
            .into_iter()
            .map(|mut r| {
                r.wall_ms = 0.0;
                r
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(run_sweep(&s).unwrap()), strip(run_sweep(&s).unwrap()));
}

#[test]
fn parallel_driver_matches_sequential() {
    let cfg = ScenarioConfig::rural(BeamPreset::Deg60).with_density_per_km(15.0);
    let trials = 1000;
    assert_eq!(
        run_monte_carlo_parallel(&cfg, trials, 5),
        run_monte_carlo(&cfg, trials, 5)
    );
}

#[test]
fn value_lists_and_grids_parse() {
    assert_eq!(parse_values("0.1, 0.3,1").unwrap(), [0.1, 0.3, 1.0]);
    assert_eq!(parse_values("0:45:4").unwrap(), [0.0, 15.0, 30.0, 45.0]);
    assert_eq!(parse_values("7:9:1").unwrap(), [7.0]);
    assert!(parse_values("1:2").is_err());
    assert!(parse_values("0:1:0").is_err());
    assert!(parse_values("a,b").is_err());
    assert_eq!(
        parse_metrics("P_NL,B").unwrap(),
        [Metric::NoLeave, Metric::Throughput]
    );
    assert!(parse_metrics("P_X").is_err());
}
