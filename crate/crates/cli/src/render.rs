//! Report rendering.
//!
//! Three formats share the same data: `human` for reading, `structured`
//! as a line-oriented key/value document whose numbers survive a parse
//! round trip, and `plot-table` as tab-separated rows for plotting tools.
//! Cells that have no value (the unobserved target's actual, for one) are
//! the literal token `NA`.

use std::fmt::Write as _;
use std::path::PathBuf;

use popcast_core::{
    BacktestProtocol, BacktestReport, Forecast, ForecastParams, PopulationSeries, RegressionLine,
    SynthParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Structured,
    PlotTable,
}

pub const NA: &str = "NA";

/// Shortest decimal form that parses back to the identical f64.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Two-decimal rounding shown alongside full precision in human output.
pub fn num2(x: f64) -> String {
    format!("{x:.2}")
}

fn describe_line(line: &RegressionLine) -> String {
    let end = line.window_start_t + line.window_len as i64 - 1;
    let slope_term = if line.slope < 0.0 {
        format!("- {}*t", num(-line.slope))
    } else {
        format!("+ {}*t", num(line.slope))
    };
    format!(
        "P(t) = {} {} over t={}..{}",
        num(line.intercept),
        slope_term,
        line.window_start_t,
        end
    )
}

const PLOT_HEADER: &str = "target_t\tactual\tpoint\tlower\tupper\thit";

pub fn forecast_human(center: &str, fc: &Forecast, params: &ForecastParams) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "forecast for center {center}");
    let _ = writeln!(out, "target period: t={}", fc.target_t);
    let _ = writeln!(
        out,
        "point estimate: {} ({})",
        num(fc.point),
        num2(fc.point)
    );
    let _ = writeln!(
        out,
        "interval: [{}, {}] ([{}, {}])",
        num(fc.lower),
        num(fc.upper),
        num2(fc.lower),
        num2(fc.upper)
    );
    let _ = writeln!(out, "radius: {} ({})", num(fc.radius), num2(fc.radius));
    let _ = writeln!(
        out,
        "long-window radius: {} ({})",
        num(fc.rho_l),
        num2(fc.rho_l)
    );
    let _ = writeln!(
        out,
        "short-window radius: {} ({})",
        num(fc.rho_c),
        num2(fc.rho_c)
    );
    let _ = writeln!(out, "long line: {}", describe_line(&fc.long_line));
    let _ = writeln!(out, "short line: {}", describe_line(&fc.short_line));
    let _ = writeln!(out, "alpha_c: {}", num(params.alpha_c));
    let _ = writeln!(out, "confidence: {}", num(params.confidence));
    out
}

pub fn forecast_structured(center: &str, fc: &Forecast, params: &ForecastParams) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind: forecast");
    let _ = writeln!(out, "center: {center}");
    let _ = writeln!(out, "target_t: {}", fc.target_t);
    let _ = writeln!(out, "alpha_c: {}", num(params.alpha_c));
    let _ = writeln!(out, "confidence: {}", num(params.confidence));
    let _ = writeln!(out, "point: {}", num(fc.point));
    let _ = writeln!(out, "lower: {}", num(fc.lower));
    let _ = writeln!(out, "upper: {}", num(fc.upper));
    let _ = writeln!(out, "radius: {}", num(fc.radius));
    let _ = writeln!(out, "rho_long: {}", num(fc.rho_l));
    let _ = writeln!(out, "rho_short: {}", num(fc.rho_c));
    let _ = writeln!(out, "long_window_start_t: {}", fc.long_line.window_start_t);
    let _ = writeln!(out, "long_window_len: {}", fc.long_line.window_len);
    let _ = writeln!(out, "long_intercept: {}", num(fc.long_line.intercept));
    let _ = writeln!(out, "long_slope: {}", num(fc.long_line.slope));
    let _ = writeln!(out, "short_window_start_t: {}", fc.short_line.window_start_t);
    let _ = writeln!(out, "short_window_len: {}", fc.short_line.window_len);
    let _ = writeln!(out, "short_intercept: {}", num(fc.short_line.intercept));
    let _ = writeln!(out, "short_slope: {}", num(fc.short_line.slope));
    let _ = writeln!(out, "negative_lower: {}", fc.lower < 0.0);
    out
}

/// Observed history plus the forecast row, plot-ready.
pub fn forecast_plot_table(series: &PopulationSeries, fc: &Forecast) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{PLOT_HEADER}");
    for obs in series.observations() {
        let _ = writeln!(
            out,
            "{}\t{}\t{NA}\t{NA}\t{NA}\t{NA}",
            obs.t,
            num(obs.population)
        );
    }
    let _ = writeln!(
        out,
        "{}\t{NA}\t{}\t{}\t{}\t{NA}",
        fc.target_t,
        num(fc.point),
        num(fc.lower),
        num(fc.upper)
    );
    out
}

fn backtest_human_block(title: &str, report: &BacktestReport, proto: &BacktestProtocol) -> String {
    let negative_lower = report
        .records
        .iter()
        .filter(|r| r.forecast.lower < 0.0)
        .count();
    let clamped = report
        .records
        .iter()
        .filter(|r| r.short_window_clamped)
        .count();
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(
        out,
        "targets: t={}..{}",
        proto.first_target_t, proto.last_target_t
    );
    let _ = writeln!(out, "runs: {}", report.runs);
    let _ = writeln!(
        out,
        "failures: {} ({:.1}%)",
        report.failures,
        report.failure_rate * 100.0
    );
    let _ = writeln!(
        out,
        "failure rate: {} ({})",
        num(report.failure_rate),
        num2(report.failure_rate)
    );
    let _ = writeln!(out, "clamped short windows: {clamped}");
    let _ = writeln!(out, "negative lower bounds: {negative_lower}");
    out
}

pub fn backtest_human(
    reports: &[BacktestReport],
    all: &BacktestReport,
    proto: &BacktestProtocol,
) -> String {
    let mut out = String::new();
    for report in reports {
        out.push_str(&backtest_human_block(
            &format!("backtest for center {}", report.center_id),
            report,
            proto,
        ));
        out.push('\n');
    }
    out.push_str(&backtest_human_block(
        &format!("aggregate of {} centers", reports.len()),
        all,
        proto,
    ));
    out
}

pub fn backtest_structured(
    reports: &[BacktestReport],
    all: &BacktestReport,
    proto: &BacktestProtocol,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind: backtest");
    let _ = writeln!(out, "centers: {}", reports.len());
    let _ = writeln!(out, "i_l: {}", proto.i_l);
    let _ = writeln!(out, "n_c: {}", proto.n_c);
    let _ = writeln!(out, "alpha_c: {}", num(proto.alpha_c));
    let _ = writeln!(out, "confidence: {}", num(proto.confidence));
    let _ = writeln!(out, "first_target_t: {}", proto.first_target_t);
    let _ = writeln!(out, "last_target_t: {}", proto.last_target_t);
    let _ = writeln!(
        out,
        "record_fields: center\ttarget_t\tactual\tpoint\tlower\tupper\trho_long\trho_short\tradius\thit\tclamped"
    );
    for report in reports {
        for rec in &report.records {
            let _ = writeln!(
                out,
                "record: {}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                report.center_id,
                rec.target_t,
                num(rec.actual),
                num(rec.forecast.point),
                num(rec.forecast.lower),
                num(rec.forecast.upper),
                num(rec.forecast.rho_l),
                num(rec.forecast.rho_c),
                num(rec.forecast.radius),
                rec.hit,
                rec.short_window_clamped
            );
        }
    }
    for report in reports {
        let _ = writeln!(
            out,
            "center_summary: {}\t{}\t{}\t{}",
            report.center_id,
            report.runs,
            report.failures,
            num(report.failure_rate)
        );
    }
    let _ = writeln!(out, "runs: {}", all.runs);
    let _ = writeln!(out, "failures: {}", all.failures);
    let _ = writeln!(out, "failure_rate: {}", num(all.failure_rate));
    out
}

/// One row per backtest record, grouped per center under `# center:`
/// comment markers (blank line between groups).
pub fn backtest_plot_table(reports: &[BacktestReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{PLOT_HEADER}");
    for (i, report) in reports.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "# center: {}", report.center_id);
        for rec in &report.records {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                rec.target_t,
                num(rec.actual),
                num(rec.forecast.point),
                num(rec.forecast.lower),
                num(rec.forecast.upper),
                rec.hit
            );
        }
    }
    out
}

pub fn synth_human(params: &SynthParams, files: &[PathBuf]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "synthesized {} centers x {} periods (seed {}, trend {}, noise {}, shocks {})",
        params.centers,
        params.periods,
        params.seed,
        num(params.trend),
        num(params.noise),
        num(params.shocks)
    );
    for file in files {
        let _ = writeln!(out, "wrote {}", file.display());
    }
    out
}

pub fn synth_structured(params: &SynthParams, files: &[PathBuf]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind: synth");
    let _ = writeln!(out, "centers: {}", params.centers);
    let _ = writeln!(out, "periods: {}", params.periods);
    let _ = writeln!(out, "seed: {}", params.seed);
    let _ = writeln!(out, "trend: {}", num(params.trend));
    let _ = writeln!(out, "noise: {}", num(params.noise));
    let _ = writeln!(out, "shocks: {}", num(params.shocks));
    for file in files {
        let _ = writeln!(out, "file: {}", file.display());
    }
    out
}

/// Long-format table of every generated observation.
pub fn synth_plot_table(series: &[PopulationSeries]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "center\tt\tpopulation");
    for s in series {
        for obs in s.observations() {
            let _ = writeln!(out, "{}\t{}\t{}", s.center_id(), obs.t, num(obs.population));
        }
    }
    out
}
