//! Command-line front end over the simulation library: run single
//! simulations, print analytic bounds, sweep reload overheads or overlay
//! throughput scales, render schedules as SVG, re-run latency-table
//! calibration, and validate input documents.
//!
//! Output is byte-identical across runs by default; `--stamp` opts into a
//! generation timestamp. Artifact paths resolve against `--out-dir`, the
//! `RECONFSIM_OUT_DIR` environment variable, or the current directory, in
//! that order. Exit status: 0 on success, 1 on usage or input errors, 2
//! when `--fail-on-divergent` is set and the verdict is divergent.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use reconfsim::{
    builtin_setup_with_table, calibrate_workload, format_duration, gantt_svg, load_latency_table,
    load_workload, parse_duration, quick_verdict, reference_problem, residuals_md,
    shipped_latency_table, simulate, sweep_csv, sweep_md, sweep_overlay, sweep_reload, trace_csv,
    utilization_bounds, GanttStyle, LatencyTable, OverlayLevel, QuickVerdict, Rational, SimResult,
    StrategyConfig, TimeSpan, Verdict, WorkloadConfig,
};

#[derive(Parser, Debug)]
#[command(
    name = "reconfsim",
    version,
    about = "Deterministic scheduling simulator for DNN workloads on one \
             reconfigurable accelerator"
)]
struct Cli {
    /// Prepend a generation timestamp to reports (off by default so output
    /// is byte-identical across runs).
    #[arg(long, global = true)]
    stamp: bool,

    /// Directory artifact files are written into; falls back to
    /// $RECONFSIM_OUT_DIR, then the current directory.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate one workload and report busy ratio, verdict, and per-task
    /// statistics.
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
        /// Write the schedule trace as CSV.
        #[arg(long, value_name = "PATH")]
        trace_csv: Option<PathBuf>,
        /// Exit with status 2 when the verdict is divergent.
        #[arg(long)]
        fail_on_divergent: bool,
    },
    /// Print analytic utilization bounds and the quick feasibility verdict
    /// without simulating.
    Analyze {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Simulate the customized strategy across reload overheads, normalized
    /// against the overlay baseline.
    SweepReload {
        #[command(flatten)]
        source: SweepSourceArgs,
        /// Comma-separated reload overheads to sweep.
        #[arg(long, value_delimiter = ',', default_value = "0ms,1ms,5ms,20ms")]
        reloads: Vec<String>,
        /// Write the sweep as CSV with exact rational values.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Simulate overlay throughput scales against a customized baseline.
    SweepOverlay {
        #[command(flatten)]
        source: SweepSourceArgs,
        /// Comma-separated overlay throughput scales to sweep.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        scales: Vec<String>,
        /// Also sweep the wide-spectrum overlay variant.
        #[arg(long)]
        wide: bool,
        /// Reload overhead of the customized baseline.
        #[arg(long, default_value = "0.2ms", value_name = "DURATION")]
        baseline_reload: String,
        /// Write the sweep as CSV with exact rational values.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Simulate one workload and render the schedule as an SVG timeline.
    Gantt {
        #[command(flatten)]
        source: SourceArgs,
        /// Output SVG path.
        #[arg(long, default_value = "gantt.svg", value_name = "PATH")]
        svg: PathBuf,
        /// Start of the drawn time window (e.g. 0ms).
        #[arg(long, value_name = "DURATION")]
        from: Option<String>,
        /// End of the drawn time window (e.g. 200ms).
        #[arg(long, value_name = "DURATION")]
        to: Option<String>,
    },
    /// Re-run latency-table calibration against the built-in target set and
    /// report residuals.
    Calibrate {
        /// Write the calibrated latency table as JSON.
        #[arg(long, value_name = "PATH")]
        table_json: Option<PathBuf>,
    },
    /// Check workload or latency-table documents and exit.
    Validate {
        /// Workload description JSON file.
        #[arg(long, value_name = "PATH")]
        workload: Option<PathBuf>,
        /// Latency table JSON file.
        #[arg(long, value_name = "PATH")]
        latency_table: Option<PathBuf>,
    },
}

/// Workload selection plus strategy flags, for commands that simulate one
/// configuration.
#[derive(Args, Debug)]
struct SourceArgs {
    /// Builtin setup (A, B, C, or D) using the shipped latency table.
    #[arg(long, value_name = "ID")]
    setup: Option<String>,

    /// Workload description JSON file (carries its own strategy).
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with_all = ["setup", "latency_table", "mode", "scale", "reload"]
    )]
    workload: Option<PathBuf>,

    /// Latency table JSON overriding the shipped values (with --setup).
    #[arg(long, value_name = "PATH")]
    latency_table: Option<PathBuf>,

    /// Deployment mode for --setup: overlay, customized, or wide-spectrum.
    #[arg(long, default_value = "overlay")]
    mode: String,

    /// Overlay throughput scale, at least 1 (overlay mode only).
    #[arg(long, value_name = "RATIO")]
    scale: Option<String>,

    /// Bitstream reload overhead (customized mode only; default 20ms).
    #[arg(long, value_name = "DURATION")]
    reload: Option<String>,

    #[command(flatten)]
    window: WindowArgs,
}

/// Workload selection for sweep commands, which impose their own strategy
/// per point.
#[derive(Args, Debug)]
struct SweepSourceArgs {
    /// Builtin setup (A, B, C, or D) using the shipped latency table.
    #[arg(long, value_name = "ID")]
    setup: Option<String>,

    /// Workload description JSON file; must use the customized strategy.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["setup", "latency_table"])]
    workload: Option<PathBuf>,

    /// Latency table JSON overriding the shipped values (with --setup).
    #[arg(long, value_name = "PATH")]
    latency_table: Option<PathBuf>,

    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Args, Debug)]
struct WindowArgs {
    /// Simulated horizon in hyperperiods.
    #[arg(long, value_name = "N")]
    horizon: Option<u32>,

    /// Hyperperiods excluded from metrics as warmup.
    #[arg(long, value_name = "N")]
    warmup: Option<u32>,
}

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{err}");
                return ExitCode::SUCCESS;
            }
            let rendered = err.render().to_string();
            let first = rendered
                .lines()
                .find(|line| !line.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("error: {}", first.strip_prefix("error: ").unwrap_or(first));
            return ExitCode::from(1);
        }
    };
    match run(&cli, &mut out) {
        Ok(code) => code,
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// A reader that stops consuming our output (`reconfsim ... | head`) is
/// normal termination, not an error worth reporting.
fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.root_cause()
        .downcast_ref::<io::Error>()
        .is_some_and(|io_err| io_err.kind() == io::ErrorKind::BrokenPipe)
}

fn run(cli: &Cli, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    if cli.stamp {
        let seconds = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(out, "generated-at: {seconds}")?;
    }
    match &cli.command {
        Command::Simulate {
            source,
            trace_csv: csv_path,
            fail_on_divergent,
        } => {
            let workload = resolve_source(source)?;
            let result = simulate(&workload)?;
            write!(out, "{}", simulation_report(&result))?;
            if let Some(path) = csv_path {
                let written = write_artifact(cli, path, &trace_csv(&result.trace))?;
                writeln!(out, "wrote: {}", written.display())?;
            }
            if *fail_on_divergent && result.verdict == Verdict::Divergent {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { source } => {
            let workload = resolve_source(source)?;
            let bounds = utilization_bounds(&workload)?;
            writeln!(out, "workload: {}", workload.name)?;
            writeln!(out, "strategy: {}", workload.strategy.label())?;
            writeln!(out, "lower utilization bound: {}", ratio(&bounds.lower))?;
            writeln!(out, "upper utilization bound: {}", ratio(&bounds.upper))?;
            writeln!(out, "blocking slack: {}", ratio(&bounds.blocking_slack))?;
            let verdict = match quick_verdict(&bounds) {
                QuickVerdict::DefiniteOverload => "definite-overload",
                QuickVerdict::LikelyFeasible => "likely-feasible",
                QuickVerdict::NeedsSimulation => "needs-simulation",
            };
            writeln!(out, "quick verdict: {verdict}")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SweepReload {
            source,
            reloads,
            csv,
        } => {
            let overheads = parse_duration_list(reloads)?;
            let base = resolve_sweep_source(source, StrategyConfig::customized(default_reload()))?;
            let report = sweep_reload(&base, &overheads)?;
            write!(out, "{}", sweep_md(&report))?;
            if let Some(path) = csv {
                let written = write_artifact(cli, path, &sweep_csv(&report))?;
                writeln!(out, "wrote: {}", written.display())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SweepOverlay {
            source,
            scales,
            wide,
            baseline_reload,
            csv,
        } => {
            let baseline = parse_duration(baseline_reload)?;
            let mut levels = Vec::with_capacity(scales.len() + 1);
            for text in scales {
                let scale: Rational = text
                    .parse()
                    .with_context(|| format!("overlay scale '{text}'"))?;
                levels.push(OverlayLevel::Scale(scale));
            }
            if *wide {
                levels.push(OverlayLevel::WideSpectrum);
            }
            let base = resolve_sweep_source(source, StrategyConfig::customized(baseline))?;
            let report = sweep_overlay(&base, &levels, baseline)?;
            write!(out, "{}", sweep_md(&report))?;
            if let Some(path) = csv {
                let written = write_artifact(cli, path, &sweep_csv(&report))?;
                writeln!(out, "wrote: {}", written.display())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gantt {
            source,
            svg,
            from,
            to,
        } => {
            let workload = resolve_source(source)?;
            let result = simulate(&workload)?;
            let mut style = GanttStyle::default();
            if from.is_some() || to.is_some() {
                let start = match from {
                    Some(text) => parse_duration(text)?.at(),
                    None => reconfsim::TimeStamp::ZERO,
                };
                let end = match to {
                    Some(text) => parse_duration(text)?.at(),
                    None => result.trace.end(),
                };
                style.window = Some((start, end));
            }
            let written = write_artifact(cli, svg, &gantt_svg(&result.trace, &style))?;
            writeln!(out, "wrote: {}", written.display())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Calibrate { table_json } => {
            let problem = reference_problem();
            let report = calibrate_workload(&problem)?;
            writeln!(out, "evaluations: {}", report.evaluations)?;
            writeln!(out, "objective: {:.6}", report.objective)?;
            writeln!(out)?;
            writeln!(out, "| model | overlay | customized | speedup |")?;
            writeln!(out, "| --- | --- | --- | --- |")?;
            for (model, latency) in &report.table.models {
                let speedup = latency.overlay_exec.as_secs_f64()
                    / latency.customized_exec.as_secs_f64()
                    - 1.0;
                writeln!(
                    out,
                    "| {model} | {:.4}ms | {:.4}ms | {speedup:.2} |",
                    latency.overlay_exec.as_secs_f64() * 1000.0,
                    latency.customized_exec.as_secs_f64() * 1000.0
                )?;
            }
            writeln!(out)?;
            write!(out, "{}", residuals_md(&report))?;
            if let Some(path) = table_json {
                let written =
                    write_artifact(cli, path, &reconfsim::latency_table_to_json(&report.table))?;
                writeln!(out, "wrote: {}", written.display())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            workload,
            latency_table,
        } => {
            if workload.is_none() && latency_table.is_none() {
                bail!("nothing to validate: pass --workload and/or --latency-table");
            }
            if let Some(path) = workload {
                let text = read_input(path)?;
                let parsed = load_workload(&text)?;
                writeln!(
                    out,
                    "ok: workload '{}' ({} tasks, {})",
                    parsed.name,
                    parsed.tasks.len(),
                    parsed.strategy.label()
                )?;
            }
            if let Some(path) = latency_table {
                let text = read_input(path)?;
                let parsed = load_latency_table(&text)?;
                writeln!(out, "ok: latency table ({} models)", parsed.models.len())?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

// ── Source resolution ──

fn default_reload() -> TimeSpan {
    parse_duration("20ms").expect("builtin default reload")
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_table(path: &Option<PathBuf>) -> anyhow::Result<LatencyTable> {
    match path {
        Some(path) => Ok(load_latency_table(&read_input(path)?)?),
        None => Ok(shipped_latency_table()),
    }
}

fn strategy_from_flags(
    mode: &str,
    scale: &Option<String>,
    reload: &Option<String>,
) -> anyhow::Result<StrategyConfig> {
    match mode {
        "overlay" => {
            if reload.is_some() {
                bail!("--reload only applies to --mode customized");
            }
            let scale = match scale {
                Some(text) => text
                    .parse()
                    .with_context(|| format!("overlay scale '{text}'"))?,
                None => Rational::ONE,
            };
            Ok(StrategyConfig::Overlay {
                scale,
                wide_spectrum: false,
            })
        }
        "customized" => {
            if scale.is_some() {
                bail!("--scale only applies to --mode overlay");
            }
            let reload_overhead = match reload {
                Some(text) => parse_duration(text)?,
                None => default_reload(),
            };
            Ok(StrategyConfig::customized(reload_overhead))
        }
        "wide-spectrum" => {
            if scale.is_some() || reload.is_some() {
                bail!("--scale and --reload do not apply to --mode wide-spectrum");
            }
            Ok(StrategyConfig::Overlay {
                scale: Rational::ONE,
                wide_spectrum: true,
            })
        }
        other => bail!("unknown mode '{other}': use overlay, customized, or wide-spectrum"),
    }
}

fn apply_window(workload: &mut WorkloadConfig, window: &WindowArgs) -> anyhow::Result<()> {
    if let Some(horizon) = window.horizon {
        workload.horizon_hyperperiods = horizon;
    }
    if let Some(warmup) = window.warmup {
        workload.warmup_hyperperiods = warmup;
    }
    workload.validate()?;
    Ok(())
}

fn pick_builtin(setup: &str, table: &LatencyTable, strategy: StrategyConfig) -> anyhow::Result<WorkloadConfig> {
    let id = setup.to_ascii_uppercase().parse::<reconfsim::SetupId>()?;
    Ok(builtin_setup_with_table(id, strategy, table)?)
}

fn resolve_source(source: &SourceArgs) -> anyhow::Result<WorkloadConfig> {
    let mut workload = match (&source.setup, &source.workload) {
        (Some(setup), None) => {
            let table = load_table(&source.latency_table)?;
            let strategy = strategy_from_flags(&source.mode, &source.scale, &source.reload)?;
            pick_builtin(setup, &table, strategy)?
        }
        (None, Some(path)) => load_workload(&read_input(path)?)?,
        (None, None) => bail!("choose a workload: pass --setup or --workload"),
        (Some(_), Some(_)) => unreachable!("clap rejects --setup with --workload"),
    };
    apply_window(&mut workload, &source.window)?;
    Ok(workload)
}

fn resolve_sweep_source(
    source: &SweepSourceArgs,
    base_strategy: StrategyConfig,
) -> anyhow::Result<WorkloadConfig> {
    let mut workload = match (&source.setup, &source.workload) {
        (Some(setup), None) => {
            let table = load_table(&source.latency_table)?;
            pick_builtin(setup, &table, base_strategy)?
        }
        (None, Some(path)) => load_workload(&read_input(path)?)?,
        (None, None) => bail!("choose a workload: pass --setup or --workload"),
        (Some(_), Some(_)) => unreachable!("clap rejects --setup with --workload"),
    };
    apply_window(&mut workload, &source.window)?;
    Ok(workload)
}

fn parse_duration_list(texts: &[String]) -> anyhow::Result<Vec<TimeSpan>> {
    texts.iter().map(|t| Ok(parse_duration(t)?)).collect()
}

// ── Report rendering ──

fn ratio(value: &Rational) -> String {
    format!("{:.6}", value.to_f64())
}

fn optional_duration(span: &Option<TimeSpan>) -> String {
    match span {
        Some(span) => format!("{:.3}ms", span.as_secs_f64() * 1000.0),
        None => "-".to_string(),
    }
}

fn simulation_report(result: &SimResult) -> String {
    let trace = &result.trace;
    let mut out = String::new();
    let _ = writeln!(out, "workload: {}", trace.workload_name);
    let _ = writeln!(out, "strategy: {}", trace.strategy_label);
    let _ = writeln!(out, "hyperperiod: {}", format_duration(trace.hyperperiod));
    let _ = writeln!(
        out,
        "horizon: {} hyperperiods (warmup {})",
        trace.horizon_hyperperiods, trace.warmup_hyperperiods
    );
    let _ = writeln!(out, "execute ratio: {}", ratio(&result.exec_ratio));
    let _ = writeln!(out, "reload ratio: {}", ratio(&result.reload_ratio));
    let _ = writeln!(out, "busy ratio: {}", ratio(&result.busy_ratio));
    if let Some((_, backlog)) = result.backlog_series.last() {
        let _ = writeln!(out, "final backlog: {}", format_duration(*backlog));
    }
    let _ = writeln!(out, "verdict: {}", result.verdict);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "| task | released | completed | misses | max response | mean response |"
    );
    let _ = writeln!(out, "| --- | --- | --- | --- | --- | --- |");
    for task in &result.per_task {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            task.name,
            task.released,
            task.completed,
            task.miss_count,
            optional_duration(&task.max_response),
            optional_duration(&task.mean_response)
        );
    }
    out
}

// ── Artifact paths ──

fn artifact_path(cli: &Cli, path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    let base = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("RECONFSIM_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    base.join(path)
}

fn write_artifact(cli: &Cli, path: &Path, contents: &str) -> anyhow::Result<PathBuf> {
    let resolved = artifact_path(cli, path);
    if let Some(parent) = resolved.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    fs::write(&resolved, contents).with_context(|| format!("writing {}", resolved.display()))?;
    Ok(resolved)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_flags_map_to_configs() {
        let overlay = strategy_from_flags("overlay", &None, &None).unwrap();
        assert_eq!(overlay, StrategyConfig::overlay());

        let scaled = strategy_from_flags("overlay", &Some("3/2".into()), &None).unwrap();
        assert_eq!(
            scaled,
            StrategyConfig::Overlay {
                scale: Rational::new(3, 2).unwrap(),
                wide_spectrum: false,
            }
        );

        let customized = strategy_from_flags("customized", &None, &Some("5ms".into())).unwrap();
        assert_eq!(
            customized,
            StrategyConfig::customized(parse_duration("5ms").unwrap())
        );

        let wide = strategy_from_flags("wide-spectrum", &None, &None).unwrap();
        assert_eq!(
            wide,
            StrategyConfig::Overlay {
                scale: Rational::ONE,
                wide_spectrum: true,
            }
        );
    }

    #[test]
    fn mismatched_strategy_flags_are_rejected() {
        assert!(strategy_from_flags("overlay", &None, &Some("1ms".into())).is_err());
        assert!(strategy_from_flags("customized", &Some("2".into()), &None).is_err());
        assert!(strategy_from_flags("turbo", &None, &None).is_err());
    }

    #[test]
    fn bare_numbers_are_not_durations() {
        assert!(parse_duration_list(&["5".to_string()]).is_err());
        assert!(parse_duration_list(&["5ms".to_string()]).is_ok());
    }

    #[test]
    fn broken_pipes_are_detected_through_context_chains() {
        let epipe = anyhow::Error::from(io::Error::from(io::ErrorKind::BrokenPipe))
            .context("writing report");
        assert!(is_broken_pipe(&epipe));

        let other = anyhow::Error::from(io::Error::from(io::ErrorKind::NotFound));
        assert!(!is_broken_pipe(&other));
        assert!(!is_broken_pipe(&anyhow::anyhow!("plain error")));
    }
}
