//! Result tables on disk.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::sweep::{ResultRow, ResultTable};

pub const COLUMNS: [&str; 9] = [
    "axis_name",
    "axis_value",
    "metric",
    "method",
    "value",
    "std_error",
    "trials",
    "seed",
    "wall_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_name(name: &str) -> Option<Format> {
        match name {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    /// Guessed from the file extension, CSV otherwise.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest text that reads back as `round_sig(x)`.
pub fn format_number(x: f64) -> String {
    round_sig(x).to_string()
}

/// The table as it reads back from disk: every float at 12 significant digits.
pub fn rounded(table: &ResultTable) -> ResultTable {
    let rows = table
        .rows
        .iter()
        .map(|r| ResultRow {
            axis_value: round_sig(r.axis_value),
            value: r.value.map(round_sig),
            std_error: r.std_error.map(round_sig),
            wall_ms: round_sig(r.wall_ms),
            ..r.clone()
        })
        .collect();
    ResultTable { rows }
}

pub fn write_csv<W: Write>(table: &ResultTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
    for r in &table.rows {
        w.write_record([
            r.axis_name.clone(),
            format_number(r.axis_value),
            r.metric.clone(),
            r.method.clone(),
            opt(r.value),
            opt(r.std_error),
            r.trials.to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            format_number(r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(table: &ResultTable, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, &rounded(table).rows)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_results(table: &ResultTable, format: Format, path: &Path) -> Result<()> {
    let file =
        std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let out = std::io::BufWriter::new(file);
    match format {
        Format::Csv => write_csv(table, out),
        Format::Json => write_json(table, out),
    }
    .with_context(|| format!("cannot write {}", path.display()))
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<ResultTable> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(COLUMNS) {
        bail!(
            "unexpected columns `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        );
    }
    let rows = rdr
        .deserialize()
        .collect::<std::result::Result<Vec<ResultRow>, _>>()?;
    Ok(ResultTable { rows })
}

pub fn read_json<R: std::io::Read>(input: R) -> Result<ResultTable> {
    let rows: Vec<ResultRow> = serde_json::from_reader(input)?;
    Ok(ResultTable { rows })
}

pub fn read_results(path: &Path) -> Result<ResultTable> {
    let file =
        std::fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let input = std::io::BufReader::new(file);
    match Format::from_path(path) {
        Format::Csv => read_csv(input),
        Format::Json => read_json(input),
    }
    .with_context(|| format!("cannot parse {}", path.display()))
}
