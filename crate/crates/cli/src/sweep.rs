//! One-dimensional parameter sweeps.

use std::time::Instant;

use mmv2x_core::simulator::{Metric, MonteCarloReport};
use mmv2x_core::{AnalyticError, AnalyticModel, BeamPreset, LinkState, ScenarioConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::parallel::run_monte_carlo_parallel;

/// The scenario parameter a sweep varies, with the unit of its values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Base stations per km.
    BsDensity,
    /// Preset beamwidth in degrees: 30, 60 or 90.
    BeamwidthPreset,
    /// Slot duration in s.
    Slot,
    /// Vehicle speed in km/h.
    Speed,
}

impl Axis {
    pub const ALL: [Axis; 4] = [
        Axis::BsDensity,
        Axis::BeamwidthPreset,
        Axis::Slot,
        Axis::Speed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::BsDensity => "bs_density",
            Axis::BeamwidthPreset => "beamwidth_preset",
            Axis::Slot => "slot",
            Axis::Speed => "speed",
        }
    }

    pub fn from_name(name: &str) -> Option<Axis> {
        Axis::ALL.into_iter().find(|a| a.name() == name)
    }

    /// The base scenario with this axis set to `value`.
    pub fn apply(self, base: &ScenarioConfig, value: f64) -> Result<ScenarioConfig, SweepError> {
        let bad = |constraint: &'static str| SweepError::AxisValue {
            axis: self.name(),
            value,
            constraint,
        };
        if !value.is_finite() {
            return Err(bad("must be finite"));
        }
        let cfg = match self {
            Axis::BsDensity if value < 0.0 => return Err(bad("must be >= 0")),
            Axis::BsDensity => base.clone().with_density_per_km(value),
            Axis::BeamwidthPreset => {
                let preset = BeamPreset::from_degrees(value).ok_or(bad("must be 30, 60 or 90"))?;
                base.clone().with_preset(preset)
            }
            Axis::Slot if value <= 0.0 => return Err(bad("must be > 0")),
            Axis::Slot => base.clone().with_slot(value),
            Axis::Speed if value < 0.0 => return Err(bad("must be >= 0")),
            Axis::Speed => base.clone().with_speed_kmh(value),
        };
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Simulate,
    Both,
}

impl Method {
    pub fn from_name(name: &str) -> Option<Method> {
        match name {
            "analytic" => Some(Method::Analytic),
            "simulate" => Some(Method::Simulate),
            "both" => Some(Method::Both),
            _ => None,
        }
    }

    fn runs_analytic(self) -> bool {
        matches!(self, Method::Analytic | Method::Both)
    }

    fn runs_simulation(self) -> bool {
        matches!(self, Method::Simulate | Method::Both)
    }
}

pub const ANALYTIC: &str = "analytic";
pub const SIMULATE: &str = "simulate";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("sweep needs at least one axis value")]
    NoValues,
    #[error("sweep needs at least one metric")]
    NoMetrics,
    #[error("simulation needs at least one trial")]
    NoTrials,
    #[error("{axis} value {value}: {constraint}")]
    AxisValue {
        axis: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("{axis} value {value}: {source}")]
    Config {
        axis: &'static str,
        value: f64,
        source: mmv2x_core::ConfigError,
    },
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub metrics: Vec<Metric>,
    pub method: Method,
    pub trials: u64,
    pub seed: u64,
}

impl SweepSpec {
    /// Validates the sweep and returns the scenario of every point.
    pub fn points(&self) -> Result<Vec<ScenarioConfig>, SweepError> {
        if self.values.is_empty() {
            return Err(SweepError::NoValues);
        }
        if self.metrics.is_empty() {
            return Err(SweepError::NoMetrics);
        }
        if self.method.runs_simulation() && self.trials == 0 {
            return Err(SweepError::NoTrials);
        }
        self.values
            .iter()
            .map(|&v| {
                let cfg = self.axis.apply(&self.base, v)?;
                cfg.validate().map_err(|source| SweepError::Config {
                    axis: self.axis.name(),
                    value: v,
                    source,
                })?;
                Ok(cfg)
            })
            .collect()
    }
}

/// One output line: a metric at one axis value by one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub axis_name: String,
    pub axis_value: f64,
    pub metric: String,
    pub method: String,
    /// Empty when the point failed.
    pub value: Option<f64>,
    pub std_error: Option<f64>,
    pub trials: u64,
    /// Monte Carlo seed; empty for analytic rows.
    pub seed: Option<u64>,
    pub wall_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    /// Rows of one metric and method, in table order.
    pub fn series<'a>(
        &'a self,
        metric: &'a str,
        method: &'a str,
    ) -> impl Iterator<Item = &'a ResultRow> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.metric == metric && r.method == method)
    }
}

/// Runs every point in parallel; rows come out ordered by axis value, then
/// metric, then method. Failures of a single point land in its rows.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable, SweepError> {
    let points = spec.points()?;
    let per_point: Vec<Vec<ResultRow>> = points
        .par_iter()
        .zip(spec.values.par_iter())
        .map(|(cfg, &value)| evaluate_point(spec, cfg, value))
        .collect();
    Ok(ResultTable {
        rows: per_point.into_iter().flatten().collect(),
    })
}

fn evaluate_point(spec: &SweepSpec, cfg: &ScenarioConfig, axis_value: f64) -> Vec<ResultRow> {
    let row = |metric: Metric, method: &str| ResultRow {
        axis_name: spec.axis.name().to_string(),
        axis_value,
        metric: metric.name().to_string(),
        method: method.to_string(),
        value: None,
        std_error: None,
        trials: 0,
        seed: None,
        wall_ms: 0.0,
        error: None,
    };

    let analytic: Vec<ResultRow> = if spec.method.runs_analytic() {
        let start = Instant::now();
        let model = AnalyticModel::new(cfg);
        let setup_ms = elapsed_ms(start);
        spec.metrics
            .iter()
            .map(|&metric| {
                let mut r = row(metric, ANALYTIC);
                let start = Instant::now();
                match model
                    .as_ref()
                    .map_err(|e| *e)
                    .and_then(|m| analytic_metric(m, metric))
                {
                    Ok(v) => {
                        r.value = Some(v);
                        r.std_error = Some(0.0);
                    }
                    Err(e) => r.error = Some(e.to_string()),
                }
                r.wall_ms = setup_ms + elapsed_ms(start);
                r
            })
            .collect()
    } else {
        Vec::new()
    };

    let simulated: Vec<ResultRow> = if spec.method.runs_simulation() {
        let start = Instant::now();
        let report = run_monte_carlo_parallel(cfg, spec.trials, spec.seed);
        let wall = elapsed_ms(start);
        spec.metrics
            .iter()
            .map(|&metric| {
                let mut r = row(metric, SIMULATE);
                r.seed = Some(spec.seed);
                r.wall_ms = wall;
                fill_simulated(&mut r, &report, metric);
                r
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut rows = Vec::with_capacity(analytic.len() + simulated.len());
    let mut a = analytic.into_iter();
    let mut s = simulated.into_iter();
    for _ in &spec.metrics {
        rows.extend(a.next());
        rows.extend(s.next());
    }
    rows
}

fn fill_simulated(r: &mut ResultRow, report: &MonteCarloReport, metric: Metric) {
    match report.get(metric) {
        Some(est) => {
            r.value = Some(est.mean);
            r.std_error = Some(est.std_error).filter(|s| s.is_finite());
            r.trials = est.trials;
        }
        None => r.error = Some("not applicable: no qualifying trials".to_string()),
    }
}

/// The analytic counterpart of a simulator metric.
pub fn analytic_metric(model: &AnalyticModel, metric: Metric) -> Result<f64, AnalyticError> {
    match metric {
        Metric::Coverage => Ok(model.coverage()?.p_cov),
        Metric::NoLeave | Metric::NoLeaveUnconditional => model.no_leave_probability(),
        Metric::Connectivity => Ok(model.connectivity_probability()?.p_c),
        Metric::LosAssociation => Ok(model.association_probability(LinkState::Los)),
        Metric::NlosAssociation => Ok(model.association_probability(LinkState::Nlos)),
        Metric::Rate => model.average_rate(),
        Metric::CommTime => model.expected_comm_time(),
        Metric::Throughput => model.average_throughput(),
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Parses `a,b,c` or an inclusive linear grid `start:stop:count`.
pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid `{text}` must be start:stop:count"));
        }
        let start: f64 = parse_number(parts[0])?;
        let stop: f64 = parse_number(parts[1])?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("grid count `{}` is not a positive integer", parts[2]))?;
        return match count {
            0 => Err("grid count must be >= 1".to_string()),
            1 => Ok(vec![start]),
            n => Ok((0..n)
                .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                .collect()),
        };
    }
    text.split(',').map(parse_number).collect()
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", s.trim()))
}

/// Parses a comma-separated metric list by name.
pub fn parse_metrics(text: &str) -> Result<Vec<Metric>, String> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            Metric::from_name(s).ok_or_else(|| {
                let known: Vec<&str> = Metric::ALL.iter().map(|m| m.name()).collect();
                format!("unknown metric `{s}`, expected one of {}", known.join(", "))
            })
        })
        .collect()
}

/// The five headline metrics.
pub const DEFAULT_METRICS: [Metric; 5] = [
    Metric::NoLeave,
    Metric::Coverage,
    Metric::Connectivity,
    Metric::LosAssociation,
    Metric::Throughput,
];
