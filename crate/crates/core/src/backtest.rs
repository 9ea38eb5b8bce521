//! Rolling-origin backtesting.
//!
//! For every target period in a range, the harness forecasts that period
//! using only earlier observations (the long window always ends exactly one
//! period before the target), then checks whether the realized population
//! landed inside the prediction interval. The failure rate over many
//! targets and centers is the empirical miscoverage of the interval.

use crate::error::{Error, Result};
use crate::forecast::{forecast_next, Forecast, ForecastParams};
use crate::series::PopulationSeries;

/// Fixed parameters of a backtest sweep. The long-window length is not a
/// field: it is implied per target as `target_t − i_l`, so the long window
/// grows as the origin rolls forward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BacktestProtocol {
    pub i_l: i64,
    pub n_c: usize,
    pub alpha_c: f64,
    pub confidence: f64,
    pub first_target_t: i64,
    pub last_target_t: i64,
}

impl BacktestProtocol {
    pub fn validate(&self) -> Result<()> {
        if self.i_l < 1 {
            return Err(Error::Domain(format!(
                "long-window start i_l must be >= 1, got {}",
                self.i_l
            )));
        }
        if self.n_c < 3 {
            return Err(Error::Domain(format!(
                "short-window length n_c must be >= 3, got {}",
                self.n_c
            )));
        }
        if !self.alpha_c.is_finite() || !(0.0..=1.0).contains(&self.alpha_c) {
            return Err(Error::Domain(format!(
                "alpha_c must lie in [0, 1], got {}",
                self.alpha_c
            )));
        }
        if !self.confidence.is_finite() || self.confidence <= 0.0 || self.confidence >= 1.0 {
            return Err(Error::Domain(format!(
                "confidence must lie strictly inside (0, 1), got {}",
                self.confidence
            )));
        }
        // The first target needs a long window of at least 3 periods.
        if self.first_target_t < self.i_l + 3 {
            return Err(Error::Domain(format!(
                "first target t={} leaves fewer than 3 periods after i_l={}",
                self.first_target_t, self.i_l
            )));
        }
        if self.last_target_t < self.first_target_t {
            return Err(Error::Domain(format!(
                "target range is empty: {}..{}",
                self.first_target_t, self.last_target_t
            )));
        }
        Ok(())
    }
}

/// Outcome of one forecast-versus-actual comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct BacktestRecord {
    pub target_t: i64,
    pub actual: f64,
    pub forecast: Forecast,
    /// Closed-interval membership: lower <= actual <= upper.
    pub hit: bool,
    /// True when the short window was shortened to fit inside the long
    /// window (early targets where target_t − i_l < n_c).
    pub short_window_clamped: bool,
}

/// All records for one center (or the "ALL" aggregate) plus counts.
#[derive(Debug, Clone, PartialEq)]
pub struct BacktestReport {
    pub center_id: String,
    pub records: Vec<BacktestRecord>,
    pub runs: usize,
    pub failures: usize,
    pub failure_rate: f64,
}

/// Replays the one-step forecast over every target in the protocol range.
pub fn run_backtest(series: &PopulationSeries, protocol: &BacktestProtocol) -> Result<BacktestReport> {
    protocol.validate()?;
    if protocol.i_l < series.first_t() {
        return Err(Error::Range(format!(
            "long window start t={} precedes first observation t={}",
            protocol.i_l,
            series.first_t()
        )));
    }
    if protocol.last_target_t > series.last_t() {
        return Err(Error::Range(format!(
            "last target t={} exceeds last observation t={}",
            protocol.last_target_t,
            series.last_t()
        )));
    }

    let mut records = Vec::with_capacity(
        (protocol.last_target_t - protocol.first_target_t + 1) as usize,
    );
    for target_t in protocol.first_target_t..=protocol.last_target_t {
        let n_l = (target_t - protocol.i_l) as usize;
        let n_c = protocol.n_c.min(n_l);
        let short_window_clamped = n_c < protocol.n_c;
        let params = ForecastParams {
            i_l: protocol.i_l,
            n_l,
            n_c,
            alpha_c: protocol.alpha_c,
            confidence: protocol.confidence,
        };
        // Both windows end at target_t − 1, so the fit never sees the
        // value it is judged against.
        let forecast = forecast_next(series, &params).map_err(|e| {
            e.context(format!(
                "center {}, target t={}",
                series.center_id(),
                target_t
            ))
        })?;
        debug_assert_eq!(forecast.target_t, target_t);
        let actual = series
            .value_at(target_t)
            .expect("target coverage checked above");
        let hit = forecast.lower <= actual && actual <= forecast.upper;
        records.push(BacktestRecord {
            target_t,
            actual,
            forecast,
            hit,
            short_window_clamped,
        });
    }

    let runs = records.len();
    let failures = records.iter().filter(|r| !r.hit).count();
    Ok(BacktestReport {
        center_id: series.center_id().to_string(),
        records,
        runs,
        failures,
        failure_rate: failures as f64 / runs as f64,
    })
}

/// Folds per-center reports into one synthetic "ALL" report.
pub fn aggregate_reports(reports: &[BacktestReport]) -> Result<BacktestReport> {
    if reports.is_empty() {
        return Err(Error::Domain("no reports to aggregate".into()));
    }
    let mut records = Vec::with_capacity(reports.iter().map(|r| r.records.len()).sum());
    let mut runs = 0usize;
    let mut failures = 0usize;
    for report in reports {
        records.extend(report.records.iter().cloned());
        runs += report.runs;
        failures += report.failures;
    }
    Ok(BacktestReport {
        center_id: "ALL".to_string(),
        records,
        runs,
        failures,
        failure_rate: failures as f64 / runs as f64,
    })
}
