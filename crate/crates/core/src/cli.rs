//! Command-line front end: `collect`, `analyze`, `seed`, `random`, `calibrate`.
//!
//! Exit codes: 0 success, 1 entropy floor unmet (or another refusal),
//! 2 unusable clock, 64 bad usage, 65 bad input data.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    build_report, calibrate_samples, frequency_distribution, min_entropy_estimate, EntropyEstimate,
    DEFAULT_FLOOR_BITS,
};
use crate::collector::{collect, CollectorConfig, Timer, TimingSeries};
use crate::conditioning::{condition, Seed256};
use crate::error::Error;
use crate::generator::StreamState;
use crate::report::{group_thousands, render_json_line, render_table};
use crate::timing_csv::{read_timings, write_timings};

pub const EXIT_OK: u8 = 0;
pub const EXIT_REFUSED: u8 = 1;
pub const EXIT_TIMER: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;

/// Environment switch equivalent to `--boost-priority`.
pub const BOOST_PRIORITY_ENV: &str = "SIDERAND_BOOST_PRIORITY";

#[derive(Debug, Parser)]
#[command(
    name = "siderand",
    version,
    about = "Entropy from CPU timing variance: collect, analyze, seed, expand"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time the workload loop and write one duration (ns) per line.
    Collect {
        #[command(flatten)]
        collector: CollectorArgs,
        /// Output file; standard output when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Report the MFV min-entropy of a timing CSV.
    Analyze {
        #[arg(long = "in", visible_alias = "from-csv", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FLOOR_BITS, value_parser = parse_floor)]
        floor: f64,
        #[arg(long)]
        label: Option<String>,
        /// Print a single JSON record instead of the table.
        #[arg(long)]
        json: bool,
        /// Clock that produced the file; inferred from the values when omitted.
        #[arg(long, value_enum)]
        timer: Option<TimerArg>,
    },
    /// Collect (or replay a CSV), check the floor, print the conditioned seed.
    Seed {
        #[command(flatten)]
        collector: CollectorArgs,
        #[arg(long, default_value_t = DEFAULT_FLOOR_BITS, value_parser = parse_floor)]
        floor: f64,
        /// Emit the seed even when the floor is not met.
        #[arg(long)]
        force: bool,
        #[arg(long, value_name = "PATH")]
        from_csv: Option<PathBuf>,
    },
    /// Write N raw bytes from the counter-mode stream.
    Random {
        #[arg(long, value_name = "N")]
        bytes: u64,
        /// Use this seed instead of collecting one.
        #[arg(long, value_name = "HEX")]
        seed_hex: Option<String>,
        #[command(flatten)]
        collector: CollectorArgs,
        #[arg(long, default_value_t = DEFAULT_FLOOR_BITS, value_parser = parse_floor)]
        floor: f64,
        #[arg(long)]
        force: bool,
    },
    /// Recommend a sample count that still clears the floor with margin.
    Calibrate {
        #[arg(long = "in", visible_alias = "from-csv", value_name = "PATH")]
        input: Option<PathBuf>,
        #[command(flatten)]
        collector: CollectorArgs,
        #[arg(long, default_value_t = DEFAULT_FLOOR_BITS, value_parser = parse_floor)]
        floor: f64,
    },
}

#[derive(Debug, Args)]
struct CollectorArgs {
    #[arg(long, default_value_t = crate::collector::DEFAULT_SAMPLES,
          value_parser = parse_positive_usize)]
    samples: usize,
    #[arg(long, default_value_t = crate::collector::DEFAULT_SCALE,
          value_parser = clap::value_parser!(u64).range(1..))]
    scale: u64,
    #[arg(long, value_enum, default_value_t = TimerArg::Ns)]
    timer: TimerArg,
    /// Request nice -20 before collecting (also SIDERAND_BOOST_PRIORITY=1).
    #[arg(long)]
    boost_priority: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TimerArg {
    Ns,
    Us,
}

impl From<TimerArg> for Timer {
    fn from(t: TimerArg) -> Self {
        match t {
            TimerArg::Ns => Timer::ProcessCpuNanoseconds,
            TimerArg::Us => Timer::WallMicroseconds,
        }
    }
}

impl CollectorArgs {
    fn to_config(&self) -> CollectorConfig {
        CollectorConfig {
            samples: self.samples,
            scale: self.scale,
            timer: self.timer.into(),
            boost_priority: self.boost_priority || boost_requested_by_env(),
            ..CollectorConfig::default()
        }
    }
}

fn parse_positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".to_owned()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_floor(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err("floor must be a non-negative number of bits".to_owned())
    }
}

fn boost_requested_by_env() -> bool {
    std::env::var(BOOST_PRIORITY_ENV)
        .map(|v| matches!(v.trim().to_ascii_lowercase().as_str(), "1" | "true" | "yes"))
        .unwrap_or(false)
}

/// Failure carrying its exit code and a diagnostic for standard error.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn input(path: &Path, err: Error) -> Self {
        let code = match err {
            Error::InvalidArgument { .. } => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Self::new(code, format!("{}: {err}", path.display()))
    }

    fn output(err: io::Error) -> Self {
        Self::new(EXIT_REFUSED, format!("write failed: {err}"))
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::ClockUnavailable { .. } | Error::CoarseTimer { .. } => EXIT_TIMER,
            Error::InvalidArgument { .. } => EXIT_USAGE,
            Error::EmptySeries | Error::Parse { .. } => EXIT_DATA,
            Error::DegenerateDistribution { .. } | Error::Io(_) => EXIT_REFUSED,
        };
        Self::new(code, err.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };

    let outcome = match cli.command {
        Command::Collect { collector, out } => {
            cmd_collect(&collector, out.as_deref(), stdout, stderr)
        }
        Command::Analyze {
            input,
            floor,
            label,
            json,
            timer,
        } => cmd_analyze(&input, floor, label, json, timer, stdout),
        Command::Seed {
            collector,
            floor,
            force,
            from_csv,
        } => cmd_seed(
            &collector,
            floor,
            force,
            from_csv.as_deref(),
            stdout,
            stderr,
        ),
        Command::Random {
            bytes,
            seed_hex,
            collector,
            floor,
            force,
        } => cmd_random(
            bytes,
            seed_hex.as_deref(),
            &collector,
            floor,
            force,
            stdout,
            stderr,
        ),
        Command::Calibrate {
            input,
            collector,
            floor,
        } => cmd_calibrate(input.as_deref(), &collector, floor, stdout, stderr),
    };

    match outcome {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(stderr, "siderand: {}", failure.message);
            failure.code
        }
    }
}

fn cmd_collect(
    args: &CollectorArgs,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    let series = collect(&args.to_config())?;
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::new(EXIT_REFUSED, format!("{}: {e}", path.display())))?;
            write_timings(BufWriter::new(file), series.durations())
                .map_err(|e| Failure::new(EXIT_REFUSED, format!("{}: {e}", path.display())))?;
        }
        None => write_timings(&mut *stdout, series.durations())
            .map_err(|e| Failure::new(EXIT_REFUSED, e.to_string()))?,
    }
    let estimate = estimate_series(&series)?;
    summarize_collection(&series, &estimate, DEFAULT_FLOOR_BITS, stderr);
    Ok(EXIT_OK)
}

fn cmd_analyze(
    input: &Path,
    floor: f64,
    label: Option<String>,
    json: bool,
    timer: Option<TimerArg>,
    stdout: &mut dyn Write,
) -> Result<u8, Failure> {
    let durations = load_csv(input)?;
    let timer = timer
        .map(Timer::from)
        .unwrap_or_else(|| infer_timer(&durations));
    let series = TimingSeries::replayed(durations, timer).map_err(|e| Failure::input(input, e))?;
    let estimate = estimate_series(&series)?;
    let label = label.unwrap_or_else(|| {
        input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "-".to_owned())
    });
    let report = build_report(&series, &estimate, series.measured_seconds(), &label, floor);
    let rendered = if json {
        render_json_line(&report) + "\n"
    } else {
        render_table(std::slice::from_ref(&report))
    };
    stdout
        .write_all(rendered.as_bytes())
        .map_err(Failure::output)?;
    Ok(if report.meets_floor {
        EXIT_OK
    } else {
        EXIT_REFUSED
    })
}

fn cmd_seed(
    args: &CollectorArgs,
    floor: f64,
    force: bool,
    from_csv: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    let seed = gated_seed(args, floor, force, from_csv, stderr)?;
    writeln!(stdout, "{}", seed.to_hex()).map_err(Failure::output)?;
    Ok(EXIT_OK)
}

fn cmd_random(
    bytes: u64,
    seed_hex: Option<&str>,
    args: &CollectorArgs,
    floor: f64,
    force: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    let seed = match seed_hex {
        Some(hex_str) => Seed256::from_hex(hex_str)?,
        None => gated_seed(args, floor, force, None, stderr)?,
    };
    let mut stream = StreamState::new(&seed);
    let mut buf = vec![0u8; 64 * 1024];
    let mut remaining = bytes;
    while remaining > 0 {
        let n = remaining.min(buf.len() as u64) as usize;
        stream.fill_bytes(&mut buf[..n]);
        stdout.write_all(&buf[..n]).map_err(Failure::output)?;
        remaining -= n as u64;
    }
    stdout.flush().map_err(Failure::output)?;
    Ok(EXIT_OK)
}

fn cmd_calibrate(
    input: Option<&Path>,
    args: &CollectorArgs,
    floor: f64,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    let series = match input {
        Some(path) => {
            let durations = load_csv(path)?;
            TimingSeries::replayed(durations, Timer::ProcessCpuNanoseconds)
                .map_err(|e| Failure::input(path, e))?
        }
        None => collect(&args.to_config())?,
    };
    let estimate = estimate_series(&series)?;
    let n = calibrate_samples(estimate.mfv_fraction, floor).map_err(|e| match e {
        Error::DegenerateDistribution { .. } => Failure::new(
            EXIT_REFUSED,
            format!(
                "every sample has the same duration (MFV {:.5}%); no sample count can reach the floor",
                estimate.mfv_percent()
            ),
        ),
        other => other.into(),
    })?;
    writeln!(stdout, "{n}").map_err(Failure::output)?;
    let _ = writeln!(
        stderr,
        "measured MFV {:.5}% over {} samples ({:.4} bits/sample); {n} samples give {} bits against a {} bit floor doubled for margin",
        estimate.mfv_percent(),
        estimate.sample_count,
        estimate.bits_per_sample,
        group_thousands(n as f64 * estimate.bits_per_sample, 2),
        group_thousands(floor, 0),
    );
    Ok(EXIT_OK)
}

/// Collects or replays a series and conditions it, refusing when the MFV
/// estimate is under `floor` unless `force` is set.
fn gated_seed(
    args: &CollectorArgs,
    floor: f64,
    force: bool,
    from_csv: Option<&Path>,
    stderr: &mut dyn Write,
) -> Result<Seed256, Failure> {
    let series = match from_csv {
        Some(path) => {
            let durations = load_csv(path)?;
            let timer = infer_timer(&durations);
            TimingSeries::replayed(durations, timer).map_err(|e| Failure::input(path, e))?
        }
        None => {
            let series = collect(&args.to_config())?;
            let estimate = estimate_series(&series)?;
            summarize_collection(&series, &estimate, floor, stderr);
            series
        }
    };
    let estimate = estimate_series(&series)?;
    if estimate.total_bits < floor {
        let msg = format!(
            "estimated {} bits is below the {} bit floor",
            group_thousands(estimate.total_bits, 2),
            group_thousands(floor, 0)
        );
        if !force {
            return Err(Failure::new(
                EXIT_REFUSED,
                format!("{msg}; refusing to emit a seed"),
            ));
        }
        let _ = writeln!(
            stderr,
            "siderand: warning: {msg}; emitting anyway (--force)"
        );
    }
    Ok(condition(&series)?)
}

fn estimate_series(series: &TimingSeries) -> Result<EntropyEstimate, Failure> {
    Ok(min_entropy_estimate(&frequency_distribution(series)?))
}

fn load_csv(path: &Path) -> Result<Vec<u64>, Failure> {
    let file = File::open(path)
        .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))?;
    read_timings(BufReader::new(file)).map_err(|e| Failure::input(path, e))
}

/// Files from the microsecond clock hold only multiples of 1,000.
fn infer_timer(durations: &[u64]) -> Timer {
    if !durations.is_empty() && durations.iter().all(|d| d % 1_000 == 0) {
        Timer::WallMicroseconds
    } else {
        Timer::ProcessCpuNanoseconds
    }
}

fn summarize_collection(
    series: &TimingSeries,
    estimate: &EntropyEstimate,
    floor: f64,
    stderr: &mut dyn Write,
) {
    let resolution = series
        .timer_resolution_ns()
        .map(|r| format!("{r} ns"))
        .unwrap_or_else(|| "unknown".to_owned());
    let elapsed = series.elapsed().map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let _ = writeln!(
        stderr,
        "{}: collected {} samples x {} iterations with the {} clock (resolution {resolution}) in {elapsed:.2} s",
        host_cpu_label(),
        series.len(),
        series.config().scale,
        series.timer(),
    );
    let _ = writeln!(
        stderr,
        "MFV {:.5}%, {} unique values, {} bits ({} the {} bit floor)",
        estimate.mfv_percent(),
        estimate.unique_values,
        group_thousands(estimate.total_bits, 2),
        if estimate.total_bits >= floor {
            "meets"
        } else {
            "BELOW"
        },
        group_thousands(floor, 0),
    );
    for w in series.warnings() {
        let _ = writeln!(stderr, "warning: {w}");
    }
}

/// CPU model from `/proc/cpuinfo` where available, else the architecture.
pub fn host_cpu_label() -> String {
    std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|info| {
            info.lines()
                .find(|l| l.starts_with("model name") || l.starts_with("Model"))
                .and_then(|l| l.split_once(':'))
                .map(|(_, v)| v.trim().to_owned())
        })
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| std::env::consts::ARCH.to_owned())
}
