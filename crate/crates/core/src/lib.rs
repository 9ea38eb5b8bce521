//! Forecasting for care-center populations.
//!
//! The model fits two ordinary least-squares lines over a long and a short
//! trailing window of a population series, extrapolates both one period past
//! the long window, and blends the two estimates with a caller-chosen weight.
//! Uncertainty is reported as a Student-t prediction interval whose radius is
//! blended the same way. A rolling-origin backtest replays that forecast over
//! historical periods and measures how often the realized population escaped
//! the interval.

pub mod backtest;
pub mod error;
pub mod forecast;
pub mod series;
pub mod statkern;
pub mod synth;

pub use backtest::{aggregate_reports, run_backtest, BacktestProtocol, BacktestRecord, BacktestReport};
pub use error::{Error, Result};
pub use forecast::{
    blend, forecast_next, interval_radius, point_estimate, resolve_windows, Forecast,
    ForecastParams, ResolvedWindows,
};
pub use series::{parse_series, read_series_file, write_series, Observation, PopulationSeries};
pub use statkern::{fit_ols, t_quantile, FitDiagnostics, RegressionLine};
pub use synth::{generate, SynthParams};
