//! `entbroadcast`: channel reports, grid sweeps, region summaries and the
//! verification suite for asymmetric entanglement broadcasting.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 route mismatch, 3 invalid
//! arguments, 4 I/O error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use entbroadcast::broadcast::{real_input, CloneParams, Pair, Scenario};
use entbroadcast::exec::Parallelism;
use entbroadcast::regions::{region_summary, write_json as write_regions_json};
use entbroadcast::sweep::{
    analyze_point, run_sweep, write_records, OutputFormat, ScenarioSelection, SweepConfig,
};
use entbroadcast::verify::{run_verify, Fault, VerifyOptions};
use entbroadcast::Error;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_ROUTE_MISMATCH: u8 = 2;
const EXIT_INVALID_ARGS: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "entbroadcast",
    version,
    about = "Asymmetric broadcasting of two-qubit entanglement"
)]
struct Cli {
    /// Worker threads (default: available parallelism; 1 runs sequentially)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report concurrence, N and F_max of one broadcast output by two routes each
    Channel(ChannelArgs),
    /// Evaluate every output pair on an (|alpha|, p) grid
    Sweep(SweepArgs),
    /// Summarize the simultaneous-inseparability regions
    Regions(RegionsArgs),
    /// Run the full verification suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScenarioArg {
    Local,
    Nonlocal,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Local => Scenario::Local,
            ScenarioArg::Nonlocal => Scenario::Nonlocal,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScenariosArg {
    Local,
    Nonlocal,
    Both,
}

impl From<ScenariosArg> for ScenarioSelection {
    fn from(s: ScenariosArg) -> Self {
        match s {
            ScenariosArg::Local => ScenarioSelection::Local,
            ScenariosArg::Nonlocal => ScenarioSelection::Nonlocal,
            ScenariosArg::Both => ScenarioSelection::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PairArg {
    A1b1,
    A2b2,
}

impl From<PairArg> for Pair {
    fn from(p: PairArg) -> Self {
        match p {
            PairArg::A1b1 => Pair::A1B1,
            PairArg::A2b2 => Pair::A2B2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum RegionsFormat {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    /// Sign error in the X-state concurrence
    ConcurrenceXSign,
}

#[derive(Args, Debug)]
struct ChannelArgs {
    /// |alpha| of the input alpha|00> + beta|11> (beta real, non-negative)
    #[arg(long)]
    alpha: f64,
    /// Cloner asymmetry p in [0, 1]
    #[arg(long)]
    p: f64,
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    #[arg(long, value_enum)]
    pair: PairArg,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "both")]
    scenario: ScenariosArg,
    /// Restrict to one pair (default: both)
    #[arg(long, value_enum)]
    pair: Option<PairArg>,
    #[arg(long, default_value_t = 201)]
    alpha_steps: usize,
    #[arg(long, default_value_t = 201)]
    p_steps: usize,
    /// Closed |alpha| interval as lo,hi
    #[arg(long, value_parser = parse_range, default_value = "0,1")]
    alpha_range: (f64, f64),
    /// Closed p interval as lo,hi
    #[arg(long, value_parser = parse_range, default_value = "0,1")]
    p_range: (f64, f64),
    /// Recorded in JSON metadata
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Recorded in JSON metadata
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
}

#[derive(Args, Debug)]
struct RegionsArgs {
    #[arg(long, value_enum, default_value = "both")]
    scenario: ScenariosArg,
    #[arg(long, value_enum, default_value = "text")]
    format: RegionsFormat,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2019)]
    seed: u64,
    /// Monte Carlo samples per teleportation channel
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected lo,hi but got '{s}'"))?;
    let lo = a
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("bad lower bound '{a}': {e}"))?;
    let hi = b
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("bad upper bound '{b}': {e}"))?;
    Ok((lo, hi))
}

/// A failure that ends the process with a specific exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgs(_) | Error::POutOfRange(_) | Error::AlphaOutOfRange(_) => {
                EXIT_INVALID_ARGS
            }
            Error::Io(_) => EXIT_IO,
            _ => EXIT_VERIFY_FAILED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::from(e).into()
    }
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| Failure {
                code: EXIT_IO,
                message: format!("io-error: cannot create {}: {e}", p.display()),
            })?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()).into())
}

fn cmd_channel(args: &ChannelArgs) -> Result<(), Failure> {
    let psi = real_input(args.alpha)?;
    let cp = CloneParams::new(args.p)?;
    let analysis = analyze_point(args.scenario.into(), args.pair.into(), &psi, cp)?;
    let mut out = io::stdout().lock();
    match args.format {
        ReportFormat::Text => write!(out, "{}", analysis.to_text())?,
        ReportFormat::Json => writeln!(out, "{}", to_json(&analysis)?)?,
    }
    out.flush()?;
    if let Some(mismatch) = analysis.route_mismatch() {
        return Err(Failure {
            code: EXIT_ROUTE_MISMATCH,
            message: format!("route-mismatch: {mismatch}"),
        });
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, mode: Parallelism) -> Result<(), Failure> {
    let config = SweepConfig {
        scenario: args.scenario.into(),
        pair: args.pair.map(Pair::from),
        alpha_steps: args.alpha_steps,
        p_steps: args.p_steps,
        alpha_range: args.alpha_range,
        p_range: args.p_range,
        seed: args.seed,
        samples: args.samples,
        format: match args.format {
            TableFormat::Csv => OutputFormat::Csv,
            TableFormat::Json => OutputFormat::Json,
        },
    };
    let records = run_sweep(&config, mode)?;
    let out = open_output(args.out.as_ref())?;
    write_records(&config, &records, out)?;
    Ok(())
}

fn cmd_regions(args: &RegionsArgs) -> Result<(), Failure> {
    let selection: ScenarioSelection = args.scenario.into();
    let summaries: Vec<_> = selection
        .scenarios()
        .into_iter()
        .map(region_summary)
        .collect();
    let mut out = open_output(args.out.as_ref())?;
    match args.format {
        RegionsFormat::Text => {
            for (i, s) in summaries.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{}", s.to_text())?;
            }
            out.flush()?;
        }
        RegionsFormat::Json => write_regions_json(&summaries, out)?,
        RegionsFormat::Csv => {
            writeln!(
                out,
                "scenario,p,a1b1_lower,a1b1_upper,a2b2_lower,a2b2_upper"
            )?;
            for s in &summaries {
                let mut buf = Vec::new();
                s.write_csv(&mut buf)?;
                // Drop the per-summary header so scenarios share one table.
                let text = String::from_utf8_lossy(&buf);
                for line in text.lines().skip(1) {
                    writeln!(out, "{line}")?;
                }
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, mode: Parallelism) -> Result<(), Failure> {
    if args.samples == 0 {
        return Err(Error::InvalidArgs("samples must be at least 1".into()).into());
    }
    let opts = VerifyOptions {
        seed: args.seed,
        samples: args.samples,
        fault: args.inject_fault.map(|f| match f {
            FaultArg::ConcurrenceXSign => Fault::ConcurrenceXSign,
        }),
        mode,
    };
    let report = run_verify(&opts);
    let mut out = open_output(args.out.as_ref())?;
    match args.format {
        ReportFormat::Text => write!(out, "{}", report.to_text())?,
        ReportFormat::Json => writeln!(out, "{}", to_json(&report)?)?,
    }
    out.flush()?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY_FAILED,
            message: format!("verification failed: {}", report.failed().join(", ")),
        })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let jobs = cli.jobs;
    let mode = match jobs {
        Some(0) => return Err(Error::InvalidArgs("--jobs must be at least 1".into()).into()),
        Some(1) => Parallelism::Sequential,
        _ => Parallelism::Parallel,
    };
    let dispatch = move || match &cli.command {
        Command::Channel(a) => cmd_channel(a),
        Command::Sweep(a) => cmd_sweep(a, mode),
        Command::Regions(a) => cmd_regions(a),
        Command::Verify(a) => cmd_verify(a, mode),
    };
    #[cfg(feature = "parallel")]
    if let Some(jobs) = jobs.filter(|&j| j > 1) {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Failure {
                code: EXIT_INVALID_ARGS,
                message: format!("invalid-args: cannot start {jobs} workers: {e}"),
            })?;
        return pool.install(dispatch);
    }
    dispatch()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_ARGS } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
