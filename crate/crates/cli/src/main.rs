use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mmv2x::config::default_scenario_toml;
use mmv2x::output::{write_csv, write_json};
use mmv2x::reference::SeriesSettings;
use mmv2x::sweep::{parse_metrics, parse_values, DEFAULT_METRICS};
use mmv2x::{
    compare_to_reference, load_fixture, parse_config, read_results, run_sweep, write_results, Axis,
    Format, Method, PathlossKind, ResultTable, SweepSpec, Tolerance,
};
use mmv2x_core::units::{linear_to_db, rad_to_deg};
use mmv2x_core::{BeamPreset, LinkState, PathLossModel, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "mmv2x",
    version,
    about = "Coverage, beam alignment and throughput of a mmWave highway V2I link"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic metrics of one scenario.
    Analytic(PointArgs),
    /// Monte Carlo metrics of one scenario.
    Simulate(PointArgs),
    /// Vary one parameter over a list of values.
    Sweep(SweepArgs),
    /// Recompute reference curves and report the deltas.
    Compare(CompareArgs),
    /// Print the beam presets and path-loss parameter sets.
    Presets {
        /// Print a complete scenario file for this model instead.
        #[arg(long, value_name = "urban|rural")]
        template: Option<String>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file (TOML).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Path-loss model when no scenario file is given.
    #[arg(long, default_value = "urban", value_name = "urban|rural")]
    model: String,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Comma-separated metric names.
    #[arg(long, value_name = "LIST")]
    metrics: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "csv|json")]
    format: Option<String>,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    run: RunArgs,
    /// bs_density (per km), beamwidth_preset (deg), slot (s) or speed (km/h).
    #[arg(long)]
    axis: String,
    /// `a,b,c` or an inclusive grid `start:stop:count`.
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    #[arg(
        long,
        default_value = "analytic",
        value_name = "analytic|simulate|both"
    )]
    method: String,
}

#[derive(Args)]
struct CompareArgs {
    /// Fixture file with reference curves.
    #[arg(long, value_name = "PATH")]
    reference: PathBuf,
    /// Only series whose label contains this text.
    #[arg(long)]
    series: Option<String>,
    /// Compare against these results instead of recomputing them.
    #[arg(long, value_name = "PATH")]
    results: Option<PathBuf>,
    /// Which reference curves to check: analytic or simulate.
    #[arg(long, default_value = "analytic")]
    method: String,
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    /// Apply the tolerance to relative instead of absolute deltas.
    #[arg(long)]
    relative: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analytic(args) => point(args, Method::Analytic),
        Command::Simulate(args) => point(args, Method::Simulate),
        Command::Sweep(args) => sweep(args),
        Command::Compare(args) => compare(args),
        Command::Presets { template } => presets(template.as_deref()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn pathloss_kind(name: &str) -> Result<PathlossKind> {
    match name {
        "urban" => Ok(PathlossKind::Urban),
        "rural" => Ok(PathlossKind::Rural),
        other => bail!("unknown model `{other}`, expected urban or rural"),
    }
}

fn load_scenario(args: &ScenarioArgs) -> Result<ScenarioConfig> {
    match &args.config {
        Some(path) => Ok(parse_config(path)?),
        None => Ok(ScenarioConfig::table_one(
            pathloss_kind(&args.model)?.model(),
            BeamPreset::Deg30,
        )),
    }
}

fn point(args: PointArgs, method: Method) -> Result<bool> {
    let base = load_scenario(&args.scenario)?;
    let density = mmv2x_core::units::per_m_to_per_km(base.bs_density);
    run_and_emit(base, Axis::BsDensity, vec![density], method, &args.run)
}

fn sweep(args: SweepArgs) -> Result<bool> {
    let base = load_scenario(&args.scenario)?;
    let axis = Axis::from_name(&args.axis).ok_or_else(|| {
        let known: Vec<&str> = Axis::ALL.iter().map(|a| a.name()).collect();
        anyhow!(
            "unknown axis `{}`, expected one of {}",
            args.axis,
            known.join(", ")
        )
    })?;
    let values = parse_values(&args.values).map_err(|e| anyhow!(e))?;
    let method = Method::from_name(&args.method)
        .ok_or_else(|| anyhow!("unknown method `{}`", args.method))?;
    run_and_emit(base, axis, values, method, &args.run)
}

fn run_and_emit(
    base: ScenarioConfig,
    axis: Axis,
    values: Vec<f64>,
    method: Method,
    run: &RunArgs,
) -> Result<bool> {
    let metrics = match &run.metrics {
        Some(list) => parse_metrics(list).map_err(|e| anyhow!(e))?,
        None => DEFAULT_METRICS.to_vec(),
    };
    let spec = SweepSpec {
        base,
        axis,
        values,
        metrics,
        method,
        trials: run.trials,
        seed: run.seed,
    };
    let table = run_sweep(&spec)?;
    let mut all_ok = true;
    for r in &table.rows {
        if let Some(e) = &r.error {
            all_ok = false;
            log::warn!(
                "{}={} {} {}: {e}",
                r.axis_name,
                r.axis_value,
                r.metric,
                r.method
            );
        }
    }
    emit(&table, run)?;
    Ok(all_ok)
}

fn emit(table: &ResultTable, run: &RunArgs) -> Result<()> {
    let format = match (&run.format, &run.out) {
        (Some(name), _) => {
            Format::from_name(name).ok_or_else(|| anyhow!("unknown format `{name}`"))?
        }
        (None, Some(path)) => Format::from_path(path),
        (None, None) => Format::Csv,
    };
    match &run.out {
        Some(path) => write_results(table, format, path),
        None => {
            let stdout = std::io::stdout().lock();
            match format {
                Format::Csv => write_csv(table, stdout),
                Format::Json => write_json(table, stdout),
            }
        }
    }
}

fn compare(args: CompareArgs) -> Result<bool> {
    let tolerance = if args.relative {
        Tolerance::Relative(args.tolerance)
    } else {
        Tolerance::Absolute(args.tolerance)
    };
    let provided = args.results.as_deref().map(read_results).transpose()?;
    let datasets: Vec<_> = load_fixture(&args.reference)?
        .into_iter()
        .filter(|d| d.method == args.method)
        .filter(|d| args.series.as_ref().map_or(true, |s| d.series.contains(s)))
        .collect();
    if datasets.is_empty() {
        bail!(
            "{} has no {} series matching the filter",
            args.reference.display(),
            args.method
        );
    }
    let method = Method::from_name(&args.method)
        .filter(|m| *m != Method::Both)
        .ok_or_else(|| anyhow!("--method must be analytic or simulate"))?;
    let mut all_passed = true;
    let mut stdout = std::io::stdout().lock();
    for dataset in &datasets {
        let table = match &provided {
            Some(t) => t.clone(),
            None => {
                let metric = mmv2x_core::simulator::Metric::from_name(&dataset.metric)
                    .ok_or_else(|| anyhow!("unknown metric `{}`", dataset.metric))?;
                let spec = SweepSpec {
                    base: SeriesSettings::parse(&dataset.series)?.scenario(),
                    axis: Axis::BsDensity,
                    values: dataset.densities(),
                    metrics: vec![metric],
                    method,
                    trials: args.trials,
                    seed: args.seed,
                };
                run_sweep(&spec).with_context(|| format!("series {}", dataset.series))?
            }
        };
        let report = compare_to_reference(&table, dataset, &args.method, tolerance)?;
        writeln!(stdout, "{report}")?;
        all_passed &= report.passed();
    }
    Ok(all_passed)
}

fn presets(template: Option<&str>) -> Result<bool> {
    let mut out = std::io::stdout().lock();
    if let Some(name) = template {
        write!(out, "{}", default_scenario_toml(pathloss_kind(name)?))?;
        return Ok(true);
    }
    writeln!(out, "beam presets")?;
    writeln!(
        out,
        "  {:<7} {:>13} {:>13} {:>9}",
        "name", "beamwidth_deg", "main_gain_db", "elements"
    )?;
    for p in BeamPreset::ALL {
        writeln!(
            out,
            "  {:<7} {:>13} {:>13} {:>9}",
            p.label(),
            p.beamwidth_deg(),
            p.main_gain_db(),
            p.elements()
        )?;
    }
    let vn = mmv2x_core::model::default_vn_antenna();
    writeln!(
        out,
        "vehicle antenna: beamwidth {} deg, main gain {} dB, side-lobe gain {} dB",
        rad_to_deg(vn.beamwidth).round(),
        linear_to_db(vn.main_gain).round(),
        linear_to_db(vn.side_gain).round()
    )?;
    for model in [PathLossModel::urban(), PathLossModel::rural()] {
        writeln!(out, "path loss: {}", model.name())?;
        match model.blockage {
            mmv2x_core::Blockage::Urban { a_los } => {
                writeln!(out, "  LOS probability exp(-{a_los} d), d in m")?
            }
            mmv2x_core::Blockage::Rural {
                obstacle_density,
                obstacle_length,
            } => writeln!(
                out,
                "  obstacle density {} per km, obstacle length {} m",
                obstacle_density * 1e3,
                obstacle_length
            )?,
        }
        for state in LinkState::ALL {
            let p = model.params(state);
            writeln!(
                out,
                "  {:<4} exponent {:<5} unit gain {:.2} dB",
                state.label(),
                p.exponent,
                linear_to_db(p.unit_gain)
            )?;
        }
    }
    Ok(true)
}
