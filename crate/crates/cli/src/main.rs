//! `popcast` command line: forecast, backtest, and synth subcommands over
//! the CSV series format.
//!
//! Exit codes are a stable scripting contract: 0 success, 1 for broken
//! input or out-of-domain parameters, 2 for requests that fall outside the
//! observed series (window or target out of range, too little data).

mod render;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use popcast_core::{
    aggregate_reports, forecast_next, generate, read_series_file, run_backtest, write_series,
    BacktestProtocol, Error, ForecastParams, PopulationSeries, SynthParams,
};
use render::Format;

#[derive(Parser)]
#[command(
    name = "popcast",
    version,
    about = "Care-center population forecasting: blended long/short-window regression with Student-t prediction intervals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One-step population forecast for a single center
    Forecast(ForecastArgs),
    /// Rolling-origin interval-coverage backtest over one or more centers
    Backtest(BacktestArgs),
    /// Generate deterministic synthetic center series
    Synth(SynthArgs),
}

#[derive(Args)]
struct ForecastArgs {
    /// Input CSV file with header t,period,population
    #[arg(long)]
    input: PathBuf,
    /// First period of the long window
    #[arg(long, default_value_t = 1)]
    il: i64,
    /// Long-window length; defaults to spanning --il through the last
    /// observation, which makes the target the first unobserved period
    #[arg(long)]
    nl: Option<usize>,
    /// Short-window length (the window ends where the long window ends)
    #[arg(long, default_value_t = 6)]
    nc: usize,
    /// Weight of the short-window estimate, in [0, 1]
    #[arg(long, default_value_t = 0.5)]
    alpha_c: f64,
    /// Prediction-interval confidence level, in (0, 1)
    #[arg(long, default_value_t = 0.9)]
    confidence: f64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BacktestArgs {
    /// Input CSV file or directory of CSV files; repeatable
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    /// First period of the long window (fixed across targets)
    #[arg(long, default_value_t = 1)]
    il: i64,
    /// Short-window length
    #[arg(long, default_value_t = 6)]
    nc: usize,
    /// Weight of the short-window estimate, in [0, 1]
    #[arg(long, default_value_t = 0.5)]
    alpha_c: f64,
    /// Prediction-interval confidence level, in (0, 1)
    #[arg(long, default_value_t = 0.9)]
    confidence: f64,
    /// Target period range A..B (default: il+10 through the last period
    /// every input covers)
    #[arg(long, value_parser = parse_target_range)]
    targets: Option<(i64, i64)>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Directory for the generated center_XX.csv files (created if missing)
    #[arg(long, default_value = ".")]
    output: PathBuf,
    /// Number of centers to generate
    #[arg(long, default_value_t = 16)]
    centers: usize,
    /// Number of periods per center
    #[arg(long, default_value_t = 63)]
    periods: usize,
    /// Generator seed; the same seed always yields the same files
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Maximum slope magnitude, persons per period
    #[arg(long, default_value_t = 1.0)]
    trend: f64,
    /// Gaussian noise standard deviation (0 disables noise)
    #[arg(long, default_value_t = 5.0)]
    noise: f64,
    /// Per-period shock probability, in [0, 1] (0 disables shocks)
    #[arg(long, default_value_t = 0.0)]
    shocks: f64,
    /// Output format for the generation summary on stdout
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

fn parse_target_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got \"{s}\""))?;
    let first: i64 = a
        .trim()
        .parse()
        .map_err(|_| format!("range start is not an integer: \"{a}\""))?;
    let last: i64 = b
        .trim()
        .parse()
        .map_err(|_| format!("range end is not an integer: \"{b}\""))?;
    Ok((first, last))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here too; they are not failures.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 1 for broken input and bad parameters, 2 for out-of-range requests.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Range(_) | Error::InsufficientData { .. } => 2,
        Error::Context { source, .. } => exit_code(source),
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Forecast(args) => cmd_forecast(args),
        Command::Backtest(args) => cmd_backtest(args),
        Command::Synth(args) => cmd_synth(args),
    }
}

fn write_output(target: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match target {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn cmd_forecast(args: ForecastArgs) -> Result<(), Error> {
    let series = read_series_file(&args.input)?;
    let n_l = match args.nl {
        Some(n) => n,
        None => {
            let span = series.last_t() - args.il + 1;
            if span < 1 {
                return Err(Error::Range(format!(
                    "long window start t={} is past the last observation t={}",
                    args.il,
                    series.last_t()
                )));
            }
            span as usize
        }
    };
    let params = ForecastParams::new(args.il, n_l, args.nc, args.alpha_c, args.confidence)?;
    let fc = forecast_next(&series, &params)?;

    if fc.lower < 0.0 {
        eprintln!(
            "warning: interval lower bound {} is negative; populations cannot go below zero",
            render::num(fc.lower)
        );
    }

    let text = match args.format {
        Format::Human => render::forecast_human(series.center_id(), &fc, &params),
        Format::Structured => render::forecast_structured(series.center_id(), &fc, &params),
        Format::PlotTable => render::forecast_plot_table(&series, &fc),
    };
    write_output(&args.output, &text)
}

/// Expands directories to their sorted *.csv contents.
fn collect_input_paths(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, Error> {
    let mut paths = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(input)?
                .collect::<std::io::Result<Vec<_>>>()?
                .into_iter()
                .map(|entry| entry.path())
                .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
                .collect();
            if entries.is_empty() {
                return Err(Error::Domain(format!(
                    "no .csv files in directory {}",
                    input.display()
                )));
            }
            entries.sort();
            paths.extend(entries);
        } else {
            paths.push(input.clone());
        }
    }
    Ok(paths)
}

fn cmd_backtest(args: BacktestArgs) -> Result<(), Error> {
    let paths = collect_input_paths(&args.input)?;
    let mut series = Vec::with_capacity(paths.len());
    for path in &paths {
        let s = read_series_file(path)
            .map_err(|e| e.context(format!("while reading {}", path.display())))?;
        series.push(s);
    }

    let (first_target_t, last_target_t) = match args.targets {
        Some(range) => range,
        None => {
            let last_common = series
                .iter()
                .map(PopulationSeries::last_t)
                .min()
                .expect("at least one input file");
            (args.il + 10, last_common)
        }
    };

    let protocol = BacktestProtocol {
        i_l: args.il,
        n_c: args.nc,
        alpha_c: args.alpha_c,
        confidence: args.confidence,
        first_target_t,
        last_target_t,
    };

    let mut reports = Vec::with_capacity(series.len());
    for s in &series {
        reports.push(run_backtest(s, &protocol)?);
    }
    let all = aggregate_reports(&reports)?;

    let negative_lower = all
        .records
        .iter()
        .filter(|r| r.forecast.lower < 0.0)
        .count();
    if negative_lower > 0 {
        eprintln!(
            "warning: {negative_lower} record(s) have a negative interval lower bound; populations cannot go below zero"
        );
    }

    let text = match args.format {
        Format::Human => render::backtest_human(&reports, &all, &protocol),
        Format::Structured => render::backtest_structured(&reports, &all, &protocol),
        Format::PlotTable => render::backtest_plot_table(&reports),
    };
    write_output(&args.output, &text)
}

fn cmd_synth(args: SynthArgs) -> Result<(), Error> {
    let params = SynthParams {
        centers: args.centers,
        periods: args.periods,
        seed: args.seed,
        trend: args.trend,
        noise: args.noise,
        shocks: args.shocks,
    };
    let series = generate(&params)?;

    fs::create_dir_all(&args.output)?;
    let mut files = Vec::with_capacity(series.len());
    for s in &series {
        let path = args.output.join(format!("{}.csv", s.center_id()));
        let file = fs::File::create(&path)
            .map_err(|e| Error::from(e).context(format!("while creating {}", path.display())))?;
        write_series(s, std::io::BufWriter::new(file))?;
        files.push(path);
    }

    let text = match args.format {
        Format::Human => render::synth_human(&params, &files),
        Format::Structured => render::synth_structured(&params, &files),
        Format::PlotTable => render::synth_plot_table(&series),
    };
    write_output(&None, &text)
}
