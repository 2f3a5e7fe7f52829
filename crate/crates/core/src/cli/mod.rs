//! Command-line front end of the `horizon-channels` binary.
//!
//! Exit codes: 0 on success, 1 on domain or I/O errors and failed
//! verification, 2 on usage errors.

pub mod output;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::analysis::{
    fit_exponential_decay, sweep, FitResult, SweepAxis, SweepGrid, SweepRow, FIGURE_POINTS,
    FIGURE_R_MAX,
};
use crate::closedform::{
    classical_capacity, coherent_information, derived_quantities, EvalOptions,
};
use crate::fockcore::TruncationPolicy;
use crate::oracle::{verification_grid, verify_grid};
use crate::parallel::{init_thread_pool, thread_cap_from_env, Execution};
use crate::unruh::{
    acceleration_from_schwarzschild, acceleration_from_squeezing, squeezing_from_acceleration,
    AccelerationSpec, Encoding, Preparation, Protocol, SchwarzschildSpec, SqueezingParameter,
    DEFAULT_OMEGA,
};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "horizon-channels",
    version,
    about = "Information measures for communication with an accelerated receiver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every quantity at one parameter point.
    Point(PointArgs),
    /// Sweep over r or a and write CSV.
    Sweep(SweepArgs),
    /// Write the data of figures 1 to 4 as fig1.csv .. fig4.csv.
    Figures(FiguresArgs),
    /// Compare the series against the Fock-space oracle.
    Verify(VerifyArgs),
    /// Fit coherent_info ~ exp(-gamma r) over a window.
    Fit(FitArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
#[command(group(ArgGroup::new("location").required(true).args(["r", "a", "mass"])))]
pub struct PointArgs {
    /// Squeezing parameter.
    #[arg(long)]
    pub r: Option<f64>,
    /// Proper acceleration.
    #[arg(long)]
    pub a: Option<f64>,
    /// Black-hole mass; requires --radius.
    #[arg(long, requires = "radius")]
    pub mass: Option<f64>,
    /// Hover radius; requires --mass.
    #[arg(long, requires = "mass")]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_OMEGA)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha_sq: f64,
    /// Restrict to one encoding (default: both).
    #[arg(long)]
    pub encoding: Option<Encoding>,
    /// Restrict to one protocol (default: both).
    #[arg(long)]
    pub protocol: Option<Protocol>,
    #[arg(long)]
    pub maximize_coherent_info: bool,
}

#[derive(Debug, Args)]
pub struct ChannelSelection {
    /// Encodings to include, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = Encoding::ALL)]
    pub encoding: Vec<Encoding>,
    /// Protocols to include, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = Protocol::ALL)]
    pub protocol: Vec<Protocol>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    /// Sweep variable: r (squeezing) or a (acceleration).
    #[arg(long, default_value = "r", value_parser = parse_axis)]
    pub axis: SweepAxis,
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    #[arg(long, default_value_t = FIGURE_R_MAX)]
    pub stop: f64,
    #[arg(long, default_value_t = FIGURE_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = DEFAULT_OMEGA)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha_sq: f64,
    #[command(flatten)]
    pub channels: ChannelSelection,
    #[arg(long)]
    pub maximize_coherent_info: bool,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FiguresArgs {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = FIGURE_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = FIGURE_R_MAX)]
    pub r_max: f64,
    #[arg(long, default_value_t = DEFAULT_OMEGA)]
    pub omega: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    /// Largest r of the grid; 3 or more adds the single-rail spot check.
    #[arg(long, default_value_t = 2.0)]
    pub r_max: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FitArgs {
    #[arg(long, default_value = "dual")]
    pub encoding: Encoding,
    #[arg(long, default_value = "quantum")]
    pub protocol: Protocol,
    /// Fit window as lo,hi in r.
    #[arg(long, default_value = "3,6", value_parser = parse_window)]
    pub window: (f64, f64),
    /// Fit rows from a CSV written by `sweep` instead of computing them.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = FIGURE_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = DEFAULT_OMEGA)]
    pub omega: f64,
}

fn parse_axis(s: &str) -> std::result::Result<SweepAxis, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_window(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected lo,hi but got '{s}'"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad window start '{lo}'"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad window end '{hi}'"))?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(format!("window start {lo} must be below its end {hi}"));
    }
    Ok((lo, hi))
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return e.exit_code();
        }
    };
    init_thread_pool(thread_cap_from_env());
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> CliResult<()> {
    let text = match command {
        Command::Point(args) => cmd_point(&args)?,
        Command::Sweep(args) => cmd_sweep(&args)?,
        Command::Figures(args) => cmd_figures(&args)?,
        Command::Verify(args) => {
            let (text, passed) = cmd_verify(&args)?;
            emit(out, &text)?;
            return if passed {
                Ok(())
            } else {
                Err(CliError::Failed("verification failed".into()))
            };
        }
        Command::Fit(args) => format_fit(&cmd_fit(&args)?),
    };
    emit(out, &text)
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
}

/// Resolves the point flags to `(r, a)`.
fn resolve_point(args: &PointArgs) -> CliResult<(SqueezingParameter, f64)> {
    if let Some(r) = args.r {
        let r = SqueezingParameter::new(r)?;
        if !(args.omega > 0.0 && args.omega.is_finite()) {
            return Err(crate::Error::Domain(format!(
                "mode frequency must be positive, got {}",
                args.omega
            ))
            .into());
        }
        return Ok((r, acceleration_from_squeezing(r, args.omega)));
    }
    let spec = match (args.a, args.mass, args.radius) {
        (Some(a), _, _) => AccelerationSpec::new(a, args.omega)?,
        (None, Some(mass), Some(radius)) => {
            acceleration_from_schwarzschild(&SchwarzschildSpec::new(mass, radius)?)?
                .with_omega(args.omega)?
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --r, --a or --mass with --radius".into(),
            ))
        }
    };
    Ok((squeezing_from_acceleration(&spec)?, spec.a))
}

pub fn cmd_point(args: &PointArgs) -> CliResult<String> {
    let (r, a) = resolve_point(args)?;
    let prep = Preparation::new(args.alpha_sq)?;
    let opts = EvalOptions {
        maximize_coherent_info: args.maximize_coherent_info,
        ..Default::default()
    };
    let encodings = args.encoding.map_or(Encoding::ALL.to_vec(), |e| vec![e]);
    let protocols = args.protocol.map_or(Protocol::ALL.to_vec(), |p| vec![p]);
    let mut text = String::new();
    for &encoding in &encodings {
        for &protocol in &protocols {
            let q = derived_quantities(&prep, encoding, protocol, r, &opts)?;
            let optimum = match protocol {
                Protocol::Classical => classical_capacity(encoding, r, &opts.series)?,
                Protocol::Quantum => coherent_information(encoding, r, &opts)?,
            };
            if !text.is_empty() {
                text.push('\n');
            }
            let lines: [(&str, String); 13] = [
                ("r", format!("{:.12}", r.value())),
                ("a", format!("{a:.12}")),
                ("omega", format!("{:.12}", args.omega)),
                ("alpha_sq", format!("{:.12}", args.alpha_sq)),
                ("encoding", encoding.to_string()),
                ("protocol", protocol.to_string()),
                ("fidelity", format!("{:.12}", q.fidelity)),
                ("mutual_info_bits", format!("{:.12}", q.mutual_info_bits)),
                (
                    "conditional_entropy_bits",
                    format!("{:.12}", q.conditional_entropy_bits),
                ),
                ("capacity_bits", format!("{:.12}", q.capacity_bits)),
                (
                    "coherent_info_bits",
                    format!("{:.12}", q.coherent_info_bits),
                ),
                (
                    "source_entropy_bits",
                    format!("{:.12}", q.source_entropy_bits),
                ),
                ("optimal_alpha_sq", format!("{:.12}", optimum.alpha_sq)),
            ];
            for (name, value) in lines {
                let _ = writeln!(text, "{name} = {value}");
            }
        }
    }
    Ok(text)
}

fn write_csv(path: &std::path::Path, rows: &[SweepRow]) -> CliResult<()> {
    let text = output::rows_to_string(rows)?;
    output::write_atomic(path, text.as_bytes()).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<String> {
    let grid = SweepGrid {
        axis: args.axis,
        start: args.start,
        stop: args.stop,
        points: args.points,
        omega: args.omega,
        alpha_sq: args.alpha_sq,
        encodings: args.channels.encoding.clone(),
        protocols: args.channels.protocol.clone(),
    };
    grid.validate().map_err(usage_if_input)?;
    let opts = EvalOptions {
        maximize_coherent_info: args.maximize_coherent_info,
        ..Default::default()
    };
    let rows = sweep(&grid, &opts)?;
    match &args.out {
        Some(path) => {
            write_csv(path, &rows)?;
            Ok(String::new())
        }
        None => Ok(output::rows_to_string(&rows)?),
    }
}

/// Input-shape problems in flags are usage errors; everything else keeps
/// its domain meaning.
fn usage_if_input(e: crate::Error) -> CliError {
    match e {
        crate::Error::Input(msg) => CliError::Usage(msg),
        other => CliError::Domain(other),
    }
}

pub const FIGURE_FILES: [&str; 4] = ["fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv"];

/// Rows of each figure: fidelity and classical mutual information use the
/// classical rows of both encodings, conditional entropy and the capacities
/// all four channels.
pub fn figure_rows(rows: &[SweepRow]) -> [Vec<SweepRow>; 4] {
    let classical: Vec<SweepRow> = rows
        .iter()
        .filter(|r| r.protocol == Protocol::Classical)
        .cloned()
        .collect();
    [classical.clone(), classical, rows.to_vec(), rows.to_vec()]
}

pub fn cmd_figures(args: &FiguresArgs) -> CliResult<String> {
    let mut grid = SweepGrid::new(SweepAxis::Squeezing, 0.0, args.r_max, args.points)
        .map_err(usage_if_input)?;
    grid.omega = args.omega;
    grid.validate().map_err(usage_if_input)?;
    let start = Instant::now();
    let rows = sweep(&grid, &EvalOptions::default())?;
    let mut text = String::new();
    for (name, subset) in FIGURE_FILES.iter().zip(figure_rows(&rows)) {
        let csv = output::rows_to_string(&subset)?;
        output::write_into(&args.out, name, csv.as_bytes()).map_err(|source| CliError::Io {
            path: args.out.join(name).display().to_string(),
            source,
        })?;
        let _ = writeln!(
            text,
            "wrote {} ({} rows)",
            args.out.join(name).display(),
            subset.len()
        );
    }
    let _ = writeln!(text, "elapsed {:.3} s", start.elapsed().as_secs_f64());
    Ok(text)
}

/// Returns the report text and whether every point passed.
pub fn cmd_verify(args: &VerifyArgs) -> CliResult<(String, bool)> {
    if !(args.tolerance > 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {}",
            args.tolerance
        )));
    }
    let start = Instant::now();
    let points = verification_grid(args.r_max);
    if points.is_empty() {
        return Err(CliError::Usage(format!(
            "no verification points with r <= {}",
            args.r_max
        )));
    }
    let reports = verify_grid(
        &points,
        args.tolerance,
        &TruncationPolicy::default(),
        &EvalOptions::default(),
        Execution::Parallel,
    );
    let mut names: Vec<&str> = Vec::new();
    for rep in &reports {
        for (name, _) in &rep.deltas {
            if !names.contains(name) {
                names.push(name);
            }
        }
    }
    let mut text = String::new();
    let _ = writeln!(text, "{:<30} {:>12}", "quantity", "max_delta");
    for name in &names {
        let worst = reports
            .iter()
            .filter_map(|r| r.delta(name))
            .fold(0.0, f64::max);
        let _ = writeln!(
            text,
            "{name:<30} {:>12}",
            output::format_significant(worst, 4)
        );
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
    for rep in &failed {
        let p = rep.point;
        let why = rep
            .error
            .clone()
            .unwrap_or_else(|| format!("max delta {:e}", rep.max_delta()));
        let _ = writeln!(
            text,
            "FAIL r={} alpha_sq={} {} {} N={}: {why}",
            p.r, p.alpha_sq, p.encoding, p.protocol, rep.truncation_dim
        );
    }
    let _ = writeln!(
        text,
        "{} of {} points passed at tolerance {:e} in {:.1} s",
        reports.len() - failed.len(),
        reports.len(),
        args.tolerance,
        start.elapsed().as_secs_f64()
    );
    Ok((text, failed.is_empty()))
}

pub fn cmd_fit(args: &FitArgs) -> CliResult<FitResult> {
    let rows = match &args.input {
        Some(path) => {
            let file = std::fs::File::open(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            output::read_rows(file)?
        }
        None => {
            let stop = FIGURE_R_MAX.max(args.window.1);
            let mut grid = SweepGrid::new(SweepAxis::Squeezing, 0.0, stop, args.points)
                .map_err(usage_if_input)?;
            grid.omega = args.omega;
            grid.encodings = vec![args.encoding];
            grid.protocols = vec![args.protocol];
            sweep(&grid, &EvalOptions::default())?
        }
    };
    let selected: Vec<SweepRow> = rows
        .into_iter()
        .filter(|r| r.encoding == args.encoding && r.protocol == args.protocol)
        .collect();
    Ok(fit_exponential_decay(&selected, args.window)?)
}

fn format_fit(fit: &FitResult) -> String {
    format!(
        "gamma = {:.12}\nlog_intercept = {:.12}\nrms_residual = {:.12}\nwindow = {},{}\n",
        fit.gamma,
        fit.log_intercept,
        fit.rms_residual,
        output::format_real(fit.window.0),
        output::format_real(fit.window.1)
    )
}
