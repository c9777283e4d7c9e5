//! Reference curves shipped as fixtures, and comparison against them.
//!
//! A fixture is a CSV file headed by `# key: value` comment lines (`figure`,
//! `metric`, `unit`, `axis`) followed by the columns
//! `series,method,bs_density_per_km,value`. A series label spells out its
//! scenario, e.g. `model=urban;psi_deg=30;slot_s=0.3;speed_kmh=100`.

use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use mmv2x_core::{BeamPreset, ScenarioConfig};

use crate::config::PathlossKind;
use crate::sweep::ResultTable;

/// Axis values closer than this are the same grid point.
pub const GRID_MATCH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDataset {
    pub figure: String,
    pub metric: String,
    /// `1` for probabilities, `Gbps` for throughput.
    pub unit: String,
    pub series: String,
    /// `analytic` or `simulate`.
    pub method: String,
    /// `(bs_density_per_km, value)` in fixture units.
    pub points: Vec<(f64, f64)>,
}

impl ReferenceDataset {
    /// SI value of one fixture unit.
    pub fn unit_scale(&self) -> Result<f64> {
        match self.unit.as_str() {
            "1" => Ok(1.0),
            "bps" => Ok(1.0),
            "Gbps" => Ok(1e9),
            other => bail!("unknown unit `{other}`"),
        }
    }

    pub fn densities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }

    pub fn settings(&self) -> Result<SeriesSettings> {
        SeriesSettings::parse(&self.series)
    }
}

/// Scenario named by a series label; unnamed parameters keep the defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSettings {
    pub model: PathlossKind,
    pub preset: BeamPreset,
    pub slot_s: f64,
    pub speed_kmh: f64,
}

impl SeriesSettings {
    pub fn parse(label: &str) -> Result<SeriesSettings> {
        let defaults = ScenarioConfig::urban(BeamPreset::Deg30);
        let mut s = SeriesSettings {
            model: PathlossKind::Urban,
            preset: BeamPreset::Deg30,
            slot_s: defaults.slot,
            speed_kmh: mmv2x_core::units::mps_to_kmh(defaults.speed),
        };
        for item in label.split(';').filter(|i| !i.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("series item `{item}` is not key=value"))?;
            let number = || -> Result<f64> {
                value
                    .parse()
                    .map_err(|_| anyhow!("series item `{item}`: not a number"))
            };
            match key {
                "model" => {
                    s.model = match value {
                        "urban" => PathlossKind::Urban,
                        "rural" => PathlossKind::Rural,
                        _ => bail!("series item `{item}`: unknown model"),
                    }
                }
                "psi_deg" => {
                    s.preset = BeamPreset::from_degrees(number()?)
                        .ok_or_else(|| anyhow!("series item `{item}`: not a preset"))?
                }
                "slot_s" => s.slot_s = number()?,
                "speed_kmh" => s.speed_kmh = number()?,
                _ => bail!("series item `{item}`: unknown key"),
            }
        }
        Ok(s)
    }

    pub fn scenario(&self) -> ScenarioConfig {
        ScenarioConfig::table_one(self.model.model(), self.preset)
            .with_slot(self.slot_s)
            .with_speed_kmh(self.speed_kmh)
    }
}

/// Every series of a fixture file, in file order.
pub fn load_fixture(path: &Path) -> Result<Vec<ReferenceDataset>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_fixture(&text).with_context(|| format!("bad fixture {}", path.display()))
}

pub fn parse_fixture(text: &str) -> Result<Vec<ReferenceDataset>> {
    let mut figure = None;
    let mut metric = None;
    let mut unit = "1".to_string();
    let mut body = String::new();
    for line in text.lines() {
        match line.strip_prefix('#') {
            Some(comment) => {
                if let Some((key, value)) = comment.split_once(':') {
                    let value = value.trim().to_string();
                    match key.trim() {
                        "figure" => figure = Some(value),
                        "metric" => metric = Some(value),
                        "unit" => unit = value,
                        _ => {}
                    }
                }
            }
            None => {
                body.push_str(line);
                body.push('\n');
            }
        }
    }
    let figure = figure.ok_or_else(|| anyhow!("missing `# figure:` header"))?;
    let metric = metric.ok_or_else(|| anyhow!("missing `# metric:` header"))?;

    #[derive(serde::Deserialize)]
    struct Line {
        series: String,
        method: String,
        bs_density_per_km: f64,
        value: f64,
    }
    let mut out: Vec<ReferenceDataset> = Vec::new();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    for line in rdr.deserialize() {
        let line: Line = line?;
        let existing = out
            .iter_mut()
            .find(|d| d.series == line.series && d.method == line.method);
        let point = (line.bs_density_per_km, line.value);
        match existing {
            Some(d) => d.points.push(point),
            None => out.push(ReferenceDataset {
                figure: figure.clone(),
                metric: metric.clone(),
                unit: unit.clone(),
                series: line.series,
                method: line.method,
                points: vec![point],
            }),
        }
    }
    if out.is_empty() {
        bail!("no data rows");
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Absolute(f64),
    Relative(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointDelta {
    pub bs_density_per_km: f64,
    pub reference: f64,
    /// In fixture units; `None` when the point failed to compute.
    pub computed: Option<f64>,
    pub abs_delta: f64,
    pub rel_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub figure: String,
    pub series: String,
    pub metric: String,
    pub method: String,
    pub tolerance: Tolerance,
    pub points: Vec<PointDelta>,
}

impl ComparisonReport {
    fn excess(&self, p: &PointDelta) -> f64 {
        match self.tolerance {
            Tolerance::Absolute(_) => p.abs_delta,
            Tolerance::Relative(_) => p.rel_delta,
        }
    }

    /// The point with the largest delta in the tolerance's sense.
    pub fn worst(&self) -> Option<&PointDelta> {
        self.points
            .iter()
            .max_by(|a, b| self.excess(a).total_cmp(&self.excess(b)))
    }

    pub fn max_abs_delta(&self) -> f64 {
        self.points.iter().map(|p| p.abs_delta).fold(0.0, f64::max)
    }

    pub fn max_rel_delta(&self) -> f64 {
        self.points.iter().map(|p| p.rel_delta).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        let tol = match self.tolerance {
            Tolerance::Absolute(t) | Tolerance::Relative(t) => t,
        };
        self.points.iter().all(|p| self.excess(p) <= tol)
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {} [{}] {}",
            self.figure, self.metric, self.series, self.method
        )?;
        writeln!(
            f,
            "  {:>12} {:>14} {:>14} {:>12} {:>12}",
            "density/km", "reference", "computed", "abs_delta", "rel_delta"
        )?;
        for p in &self.points {
            let computed = p
                .computed
                .map(|c| format!("{c:14.6}"))
                .unwrap_or_else(|| format!("{:>14}", "failed"));
            writeln!(
                f,
                "  {:>12.6} {:>14.6} {} {:>12.3e} {:>12.3e}",
                p.bs_density_per_km, p.reference, computed, p.abs_delta, p.rel_delta
            )?;
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        match self.worst() {
            Some(w) => write!(
                f,
                "  {verdict}: max abs delta {:.3e}, max rel delta {:.3e}, worst point at {} /km ({:?})",
                self.max_abs_delta(),
                self.max_rel_delta(),
                w.bs_density_per_km,
                self.tolerance
            ),
            None => write!(f, "  {verdict}: no points"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompareError {
    #[error("axis is `{found}`, reference curves are over bs_density")]
    WrongAxis { found: String },
    #[error("no computed point within {GRID_MATCH} of reference densities {missing:?}")]
    GridMismatch { missing: Vec<f64> },
    #[error("{0}")]
    Unit(String),
}

/// Matches each reference point with the computed row at the same density
/// (no interpolation) and measures the deltas in fixture units.
pub fn compare_to_reference(
    table: &ResultTable,
    dataset: &ReferenceDataset,
    method: &str,
    tolerance: Tolerance,
) -> Result<ComparisonReport, CompareError> {
    let scale = dataset
        .unit_scale()
        .map_err(|e| CompareError::Unit(e.to_string()))?;
    let rows: Vec<_> = table.series(&dataset.metric, method).collect();
    if let Some(r) = rows.iter().find(|r| r.axis_name != "bs_density") {
        return Err(CompareError::WrongAxis {
            found: r.axis_name.clone(),
        });
    }
    let mut missing = Vec::new();
    let mut points = Vec::with_capacity(dataset.points.len());
    for &(density, reference) in &dataset.points {
        let Some(row) = rows
            .iter()
            .find(|r| (r.axis_value - density).abs() <= GRID_MATCH)
        else {
            missing.push(density);
            continue;
        };
        let computed = row.value.map(|v| v / scale);
        let (abs_delta, rel_delta) = match computed {
            Some(c) => {
                let d = (c - reference).abs();
                let rel = if reference != 0.0 {
                    d / reference.abs()
                } else if d == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                (d, rel)
            }
            None => (f64::INFINITY, f64::INFINITY),
        };
        points.push(PointDelta {
            bs_density_per_km: density,
            reference,
            computed,
            abs_delta,
            rel_delta,
        });
    }
    if !missing.is_empty() {
        return Err(CompareError::GridMismatch { missing });
    }
    Ok(ComparisonReport {
        figure: dataset.figure.clone(),
        series: dataset.series.clone(),
        metric: dataset.metric.clone(),
        method: method.to_string(),
        tolerance,
        points,
    })
}
