//! File formats, parameter sweeps, parallel Monte Carlo and reference
//! comparisons on top of `mmv2x-core`.
//!
//! Every number this crate emits comes from the core analytic model or
//! simulator; this layer only parses, schedules and serializes.

pub mod config;
pub mod output;
pub mod parallel;
pub mod reference;
pub mod sweep;

pub use config::{parse_config, parse_config_str, ConfigFileError, PathlossKind};
pub use output::{read_results, write_results, Format};
pub use parallel::run_monte_carlo_parallel;
pub use reference::{
    compare_to_reference, load_fixture, ComparisonReport, ReferenceDataset, Tolerance,
};
pub use sweep::{run_sweep, Axis, Method, ResultRow, ResultTable, SweepSpec};
