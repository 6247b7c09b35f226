//! The `stationplan` command line: ingest -> solve -> report.
//!
//! Exit statuses: 0 success, 2 argument errors, 3 infeasible instances,
//! 4 data errors. Results go to stdout or `--out`; diagnostics (ingest
//! warnings, tie notes, errors) go to stderr. Setting the environment
//! variable `STATIONPLAN_STRICT=1` turns recoverable ingest rejections
//! into hard errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use thiserror::Error;

use crate::cover::{min_max_threshold, solve_max_coverage};
use crate::doors::{baseline_quotas, doors_restricted, doors_unrestricted, quota_boundary_ties};
use crate::error::{ErrorKind, SolveError};
use crate::heuristic::heuristic_allocate;
use crate::ingest::{
    load_allocation, load_allocation_columns, load_coverage_instance, load_demand,
    load_demand_weeks, load_quotas, load_registry, AllocationColumn, IngestError, IngestMode,
    IngestReport, WeekSelect,
};
use crate::model::{
    BuildingAllocation, BuildingId, CampusRegistry, DemandSnapshot, ModelParams, ModelTag,
};
use crate::report::{
    self, render_allocation, render_coverage, render_diff, render_histogram_csv,
    render_sensitivity, render_threshold, OutputFormat, ReportError,
};
use crate::target::target_allocate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_DATA: i32 = 4;

/// Set to `1` to make every ingest rejection a hard error.
pub const STRICT_ENV_VAR: &str = "STATIONPLAN_STRICT";

#[derive(Parser)]
#[command(
    name = "stationplan",
    version,
    about = "Allocate hand-sanitizer stations across campus buildings and doors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Write the result to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; solvers default to csv, reports to text
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

impl OutputOpts {
    fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.map(OutputFormat::from).unwrap_or(default)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColumnArg {
    Initial,
    Heuristic,
    Model2,
    Model4,
}

impl From<ColumnArg> for AllocationColumn {
    fn from(value: ColumnArg) -> Self {
        match value {
            ColumnArg::Initial => AllocationColumn::Initial,
            ColumnArg::Heuristic => AllocationColumn::Heuristic,
            ColumnArg::Model2 => AllocationColumn::Model2,
            ColumnArg::Model4 => AllocationColumn::Model4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Heuristic,
    Target,
    DoorsRestricted,
    DoorsUnrestricted,
}

#[derive(Subcommand)]
enum Command {
    /// Demand-proportional building allocation (shares round up)
    Heuristic {
        /// Campus registry CSV
        #[arg(long)]
        registry: PathBuf,
        /// Door-access demand CSV
        #[arg(long)]
        demand: PathBuf,
        /// Week label to select from a multi-week demand file
        #[arg(long)]
        week: Option<String>,
        /// Total stations to allocate
        #[arg(long)]
        total: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Maximal classroom coverage within one building
    Cover {
        /// Coverage instance CSV (classroom_id,site_id,seconds)
        #[arg(long)]
        instance: PathBuf,
        /// Number of stations to place
        #[arg(long)]
        stations: usize,
        /// Coverage threshold in seconds (strictly-below counts)
        #[arg(long)]
        threshold: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Smallest worst-case travel time attainable with p stations
    CoverThreshold {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        stations: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Match pump supply to building demand (quadratic target)
    Target {
        #[arg(long)]
        registry: PathBuf,
        #[arg(long)]
        demand: PathBuf,
        #[arg(long)]
        week: Option<String>,
        #[arg(long)]
        total: u32,
        /// Pumps per station
        #[arg(long, default_value_t = crate::model::DEFAULT_PUMPS_PER_STATION)]
        pumps: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Door-level placement holding each building to a quota
    DoorsRestricted {
        #[arg(long)]
        registry: PathBuf,
        #[arg(long)]
        demand: PathBuf,
        #[arg(long)]
        week: Option<String>,
        /// Per-building quota CSV (building_id,quota)
        #[arg(long, conflicts_with = "use_baseline")]
        quotas: Option<PathBuf>,
        /// Use each building's initial deployment as its quota
        #[arg(long)]
        use_baseline: bool,
        /// Max dispensers per door
        #[arg(long, default_value_t = crate::model::DEFAULT_MAX_PER_DOOR)]
        cap: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Door-level placement under a campus-wide budget
    DoorsUnrestricted {
        #[arg(long)]
        registry: PathBuf,
        #[arg(long)]
        demand: PathBuf,
        #[arg(long)]
        week: Option<String>,
        #[arg(long)]
        total: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Compare a candidate allocation against a baseline
    Diff {
        /// Baseline allocation CSV (or allocation-columns table)
        #[arg(long)]
        baseline: PathBuf,
        /// Candidate allocation CSV (or allocation-columns table)
        #[arg(long)]
        candidate: PathBuf,
        /// Column to take from an allocation-columns baseline file
        #[arg(long, value_enum)]
        baseline_column: Option<ColumnArg>,
        /// Column to take from an allocation-columns candidate file
        #[arg(long, value_enum)]
        candidate_column: Option<ColumnArg>,
        /// Emit the delta histogram (CSV `delta,count`) instead of the table
        #[arg(long)]
        histogram: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Re-run one model across every week in a demand file
    Sensitivity {
        #[arg(long)]
        registry: PathBuf,
        /// Multi-week demand CSV; every distinct week becomes a snapshot
        #[arg(long)]
        demand: PathBuf,
        /// Which model to re-run per week
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        total: Option<u32>,
        #[arg(long)]
        pumps: Option<u32>,
        #[arg(long, conflicts_with = "use_baseline")]
        quotas: Option<PathBuf>,
        #[arg(long)]
        use_baseline: bool,
        #[arg(long)]
        cap: Option<u32>,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Ingest(#[from] IngestError),

    #[error(transparent)]
    Solve(#[from] SolveError),

    #[error(transparent)]
    Report(#[from] ReportError),

    #[error("{0}")]
    Usage(String),
}

fn kind_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Argument => EXIT_ARGUMENT,
        ErrorKind::Infeasible => EXIT_INFEASIBLE,
        ErrorKind::Data => EXIT_DATA,
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_ARGUMENT,
            CliError::Io { .. } | CliError::Ingest(_) => EXIT_DATA,
            CliError::Solve(e) => kind_code(e.kind()),
            CliError::Report(ReportError::Solve(e)) => kind_code(e.kind()),
            CliError::Report(_) => EXIT_DATA,
        }
    }
}

/// Entry point used by `main`: strict mode comes from the environment.
pub fn run<O: Write, E: Write>(
    argv: impl IntoIterator<Item = String>,
    stdout: &mut O,
    stderr: &mut E,
) -> i32 {
    let strict = std::env::var(STRICT_ENV_VAR).is_ok_and(|v| v == "1");
    run_with(argv, strict, stdout, stderr)
}

/// Same as [`run`] with strict mode injected, for tests and embedding.
pub fn run_with<O: Write, E: Write>(
    argv: impl IntoIterator<Item = String>,
    strict: bool,
    stdout: &mut O,
    stderr: &mut E,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return match err.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    EXIT_ARGUMENT
                }
            };
        }
    };
    let mode = if strict {
        IngestMode::Strict
    } else {
        IngestMode::Lenient
    };
    match dispatch(cli.command, mode, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch<O: Write, E: Write>(
    command: Command,
    mode: IngestMode,
    stdout: &mut O,
    stderr: &mut E,
) -> Result<(), CliError> {
    match command {
        Command::Heuristic {
            registry,
            demand,
            week,
            total,
            output,
        } => {
            let reg = load_registry_file(&registry, mode, stderr)?;
            let snap = load_demand_file(&demand, &reg, week, mode, stderr)?;
            let alloc = heuristic_allocate(&snap, &reg, total)?;
            emit(
                &render_allocation(&alloc, output.format_or(OutputFormat::Csv)),
                &output,
                stdout,
            )
        }
        Command::Cover {
            instance,
            stations,
            threshold,
            output,
        } => {
            if !threshold.is_finite() || threshold < 0.0 {
                return Err(CliError::Usage(format!(
                    "--threshold must be a finite non-negative number, got {threshold}"
                )));
            }
            let inst = load_coverage_instance(open(&instance)?)?;
            let solution = solve_max_coverage(&inst, stations, threshold)?;
            emit(
                &render_coverage(&inst, &solution, output.format_or(OutputFormat::Text)),
                &output,
                stdout,
            )
        }
        Command::CoverThreshold {
            instance,
            stations,
            output,
        } => {
            let inst = load_coverage_instance(open(&instance)?)?;
            let solution = min_max_threshold(&inst, stations)?;
            emit(
                &render_threshold(&inst, &solution, output.format_or(OutputFormat::Text)),
                &output,
                stdout,
            )
        }
        Command::Target {
            registry,
            demand,
            week,
            total,
            pumps,
            output,
        } => {
            let reg = load_registry_file(&registry, mode, stderr)?;
            let snap = load_demand_file(&demand, &reg, week, mode, stderr)?;
            let alloc = target_allocate(&snap, &reg, total, pumps)?;
            emit(
                &render_allocation(&alloc, output.format_or(OutputFormat::Csv)),
                &output,
                stdout,
            )
        }
        Command::DoorsRestricted {
            registry,
            demand,
            week,
            quotas,
            use_baseline,
            cap,
            output,
        } => {
            let reg = load_registry_file(&registry, mode, stderr)?;
            let snap = load_demand_file(&demand, &reg, week, mode, stderr)?;
            let quota_map = resolve_quotas(quotas.as_deref(), use_baseline, &reg)?;
            let alloc = doors_restricted(&snap, &reg, &quota_map, cap)?;
            for tie in quota_boundary_ties(&snap, &reg, &quota_map, cap)? {
                let doors = tie
                    .doors
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(", ");
                let _ = writeln!(
                    stderr,
                    "note: building '{}': doors {doors} share demand {} but received \
                     unequal stations; the quota boundary fell on a tie",
                    tie.building, tie.demand
                );
            }
            emit(
                &render_allocation(&alloc, output.format_or(OutputFormat::Csv)),
                &output,
                stdout,
            )
        }
        Command::DoorsUnrestricted {
            registry,
            demand,
            week,
            total,
            output,
        } => {
            let reg = load_registry_file(&registry, mode, stderr)?;
            let snap = load_demand_file(&demand, &reg, week, mode, stderr)?;
            let alloc = doors_unrestricted(&snap, &reg, total)?;
            emit(
                &render_allocation(&alloc, output.format_or(OutputFormat::Csv)),
                &output,
                stdout,
            )
        }
        Command::Diff {
            baseline,
            candidate,
            baseline_column,
            candidate_column,
            histogram,
            output,
        } => {
            let base = load_allocation_side(&baseline, baseline_column, "--baseline-column")?;
            let cand = load_allocation_side(&candidate, candidate_column, "--candidate-column")?;
            let diff = report::diff(&cand, &base)?;
            let rendered = if histogram {
                match output.format_or(OutputFormat::Csv) {
                    OutputFormat::Csv => render_histogram_csv(&diff),
                    _ => {
                        return Err(CliError::Usage(
                            "--histogram emits CSV; drop --format or use --format csv".to_string(),
                        ))
                    }
                }
            } else {
                render_diff(&diff, output.format_or(OutputFormat::Text))
            };
            emit(&rendered, &output, stdout)
        }
        Command::Sensitivity {
            registry,
            demand,
            model,
            total,
            pumps,
            quotas,
            use_baseline,
            cap,
            output,
        } => {
            let reg = load_registry_file(&registry, mode, stderr)?;
            let (snapshots, report) = load_demand_weeks(open(&demand)?, &reg, mode)?;
            emit_warnings(&demand, &report, stderr);

            let params = ModelParams {
                total_stations: total,
                pumps_per_station: pumps,
                per_building_quota: match (quotas.as_deref(), use_baseline) {
                    (None, false) => None,
                    (path, use_baseline) => Some(resolve_quotas(path, use_baseline, &reg)?),
                },
                max_per_door: cap,
                ..ModelParams::default()
            };
            let result = run_sensitivity(model, &params, &reg, &snapshots)?;
            emit(
                &render_sensitivity(&result, output.format_or(OutputFormat::Text)),
                &output,
                stdout,
            )
        }
    }
}

fn run_sensitivity(
    model: ModelArg,
    params: &ModelParams,
    registry: &CampusRegistry,
    snapshots: &[DemandSnapshot],
) -> Result<report::SensitivityReport, CliError> {
    let need_total = |model: &str| {
        params
            .total_stations
            .ok_or_else(|| CliError::Usage(format!("--total is required for --model {model}")))
    };
    let report = match model {
        ModelArg::Heuristic => {
            let total = need_total("heuristic")?;
            report::sensitivity(|s| heuristic_allocate(s, registry, total), snapshots)?
        }
        ModelArg::Target => {
            let total = need_total("target")?;
            let pumps = params.pumps_per_station_or_default();
            report::sensitivity(|s| target_allocate(s, registry, total, pumps), snapshots)?
        }
        ModelArg::DoorsRestricted => {
            let quota_map = params.per_building_quota.clone().ok_or_else(|| {
                CliError::Usage(
                    "--quotas FILE or --use-baseline is required for --model doors-restricted"
                        .to_string(),
                )
            })?;
            let cap = params.max_per_door_or_default();
            report::sensitivity(
                |s| doors_restricted(s, registry, &quota_map, cap),
                snapshots,
            )?
        }
        ModelArg::DoorsUnrestricted => {
            let total = need_total("doors-unrestricted")?;
            report::sensitivity(|s| doors_unrestricted(s, registry, total), snapshots)?
        }
    };
    Ok(report)
}

/// Writes the rendered result to `--out` or stdout.
fn emit<O: Write>(rendered: &str, output: &OutputOpts, stdout: &mut O) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, rendered).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => stdout
            .write_all(rendered.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn open(path: &Path) -> Result<fs::File, CliError> {
    fs::File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit_warnings<E: Write>(path: &Path, report: &IngestReport, stderr: &mut E) {
    for (row, message) in &report.warnings {
        let _ = writeln!(stderr, "warning: {}:{row}: {message}", path.display());
    }
}

fn load_registry_file<E: Write>(
    path: &Path,
    mode: IngestMode,
    stderr: &mut E,
) -> Result<CampusRegistry, CliError> {
    let (registry, report) = load_registry(open(path)?, mode)?;
    emit_warnings(path, &report, stderr);
    Ok(registry)
}

fn load_demand_file<E: Write>(
    path: &Path,
    registry: &CampusRegistry,
    week: Option<String>,
    mode: IngestMode,
    stderr: &mut E,
) -> Result<DemandSnapshot, CliError> {
    let select = match week {
        Some(label) => WeekSelect::Label(label),
        None => WeekSelect::Single,
    };
    let (snapshot, report) = load_demand(open(path)?, registry, select, mode)?;
    emit_warnings(path, &report, stderr);
    Ok(snapshot)
}

fn resolve_quotas(
    path: Option<&Path>,
    use_baseline: bool,
    registry: &CampusRegistry,
) -> Result<IndexMap<BuildingId, u32>, CliError> {
    match (path, use_baseline) {
        (Some(path), false) => Ok(load_quotas(open(path)?, registry)?),
        (None, true) => Ok(baseline_quotas(registry)),
        _ => Err(CliError::Usage(
            "pass exactly one of --quotas FILE or --use-baseline".to_string(),
        )),
    }
}

/// Loads one side of a diff: either an allocation interchange file or,
/// with a column flag, the bundled allocation-columns table.
fn load_allocation_side(
    path: &Path,
    column: Option<ColumnArg>,
    column_flag: &str,
) -> Result<BuildingAllocation, CliError> {
    match column {
        Some(column) => {
            let table = load_allocation_columns(open(path)?)?;
            Ok(table.column(column.into()).clone())
        }
        None => {
            let bytes = fs::read(path).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            if is_columns_file(&bytes) {
                return Err(CliError::Usage(format!(
                    "{} is an allocation-columns table; pick a column with {column_flag}",
                    path.display()
                )));
            }
            // provenance is not carried by the interchange format
            Ok(load_allocation(bytes.as_slice(), ModelTag::Baseline)?)
        }
    }
}

fn is_columns_file(bytes: &[u8]) -> bool {
    let mut reader = csv::Reader::from_reader(bytes);
    reader
        .headers()
        .map(crate::ingest::is_columns_header)
        .unwrap_or(false)
}
