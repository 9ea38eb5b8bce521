//! Dual-regression forecasting engine.
//!
//! A long window starting at `i_l` captures the overall trend and a short
//! window covering the most recent `n_c` periods captures recent shifts.
//! Both windows end at the same last observed period; the short window's
//! start is therefore forced to `i_l + n_l − n_c`. Each window gets an OLS
//! line, both lines are extrapolated one period past the windows, and the
//! two extrapolations (and their interval radii) are blended with weight
//! `alpha_c` on the short side.

use crate::error::{Error, Result};
use crate::series::PopulationSeries;
use crate::statkern::{fit_ols, t_quantile, FitDiagnostics, RegressionLine};

/// Operator-chosen forecast parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForecastParams {
    /// First period of the long window.
    pub i_l: i64,
    /// Long-window length.
    pub n_l: usize,
    /// Short-window length.
    pub n_c: usize,
    /// Weight of the short-window estimate, in [0, 1].
    pub alpha_c: f64,
    /// Confidence level of the prediction interval, in (0, 1).
    pub confidence: f64,
}

impl ForecastParams {
    pub fn new(i_l: i64, n_l: usize, n_c: usize, alpha_c: f64, confidence: f64) -> Result<Self> {
        let params = ForecastParams {
            i_l,
            n_l,
            n_c,
            alpha_c,
            confidence,
        };
        params.validate()?;
        Ok(params)
    }

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
        if self.n_c > self.n_l {
            return Err(Error::Domain(format!(
                "short-window length n_c={} must not exceed long-window length n_l={}",
                self.n_c, self.n_l
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
        Ok(())
    }
}

/// Concrete window bounds implied by the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedWindows {
    pub long_start_t: i64,
    pub long_len: usize,
    pub short_start_t: i64,
    pub short_len: usize,
    /// One period past both windows; the period being forecast.
    pub target_t: i64,
}

/// Turns parameters into concrete window bounds against a series.
///
/// The long window is [i_l, i_l+n_l−1], the short window ends at the same
/// period, so it starts at i_l + n_l − n_c. The forecast target is the
/// period immediately after both windows. The series must cover the long
/// window; it may extend further (a backtest forecasts interior periods).
pub fn resolve_windows(
    params: &ForecastParams,
    series: &PopulationSeries,
) -> Result<ResolvedWindows> {
    params.validate()?;
    let long_end_t = params.i_l + params.n_l as i64 - 1;
    if params.i_l < series.first_t() {
        return Err(Error::Range(format!(
            "long window start t={} precedes first observation t={}",
            params.i_l,
            series.first_t()
        )));
    }
    if long_end_t > series.last_t() {
        return Err(Error::Range(format!(
            "long window end t={} exceeds last observation t={}",
            long_end_t,
            series.last_t()
        )));
    }
    let short_start_t = params.i_l + params.n_l as i64 - params.n_c as i64;
    Ok(ResolvedWindows {
        long_start_t: params.i_l,
        long_len: params.n_l,
        short_start_t,
        short_len: params.n_c,
        target_t: long_end_t + 1,
    })
}

/// Convex combination of the two window estimates.
///
/// Written so the degenerate weights and coincident-window cases return
/// the single-window value bit for bit, not merely up to rounding.
pub fn blend(long_value: f64, short_value: f64, alpha_c: f64) -> f64 {
    if long_value == short_value || alpha_c == 0.0 {
        return long_value;
    }
    if alpha_c == 1.0 {
        return short_value;
    }
    long_value * (1.0 - alpha_c) + short_value * alpha_c
}

/// Blended point estimate at the target period.
pub fn point_estimate(
    long_line: &RegressionLine,
    short_line: &RegressionLine,
    target_t: i64,
    alpha_c: f64,
) -> f64 {
    blend(
        long_line.value_at(target_t),
        short_line.value_at(target_t),
        alpha_c,
    )
}

/// Prediction-interval radius for a single fitted line at `target_t`:
///
///   t*_{n−2,(1−γ)/2} · sqrt( [1 + 1/n + (target_t − t̄)² / (Σt² − n·t̄²)] · s_e² )
///
/// and exactly 0 when the window fit is exact (s_e² = 0).
pub fn interval_radius(
    line: &RegressionLine,
    diag: &FitDiagnostics,
    target_t: i64,
    confidence: f64,
) -> Result<f64> {
    let n = line.window_len;
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    if !confidence.is_finite() || confidence <= 0.0 || confidence >= 1.0 {
        return Err(Error::Domain(format!(
            "confidence must lie strictly inside (0, 1), got {confidence}"
        )));
    }
    if diag.s_e2 == 0.0 {
        return Ok(0.0);
    }
    let tq = t_quantile(n - 2, confidence)?;
    let nf = n as f64;
    let dev = target_t as f64 - diag.mean_t;
    let spread = diag.sum_t_sq - nf * diag.mean_t * diag.mean_t;
    let factor = 1.0 + 1.0 / nf + dev * dev / spread;
    Ok(tq * (factor * diag.s_e2).sqrt())
}

/// A complete one-step-ahead forecast.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    /// Forecast period, one past both fit windows.
    pub target_t: i64,
    /// Blended point estimate.
    pub point: f64,
    /// Long-window interval radius.
    pub rho_l: f64,
    /// Short-window interval radius.
    pub rho_c: f64,
    /// Blended radius: rho_l·(1−α_C) + rho_c·α_C.
    pub radius: f64,
    /// point − radius. May be negative; callers decide how to present that.
    pub lower: f64,
    /// point + radius.
    pub upper: f64,
    pub long_line: RegressionLine,
    pub short_line: RegressionLine,
}

/// Runs the full pipeline: resolve windows, fit both lines, blend the
/// extrapolations and the radii. Deterministic.
pub fn forecast_next(series: &PopulationSeries, params: &ForecastParams) -> Result<Forecast> {
    let windows = resolve_windows(params, series)?;
    let long_obs = series.slice_window(windows.long_start_t, windows.long_len)?;
    let short_obs = series.slice_window(windows.short_start_t, windows.short_len)?;
    let (long_line, long_diag) = fit_ols(long_obs)?;
    let (short_line, short_diag) = fit_ols(short_obs)?;

    let point = point_estimate(&long_line, &short_line, windows.target_t, params.alpha_c);
    let rho_l = interval_radius(&long_line, &long_diag, windows.target_t, params.confidence)?;
    let rho_c = interval_radius(&short_line, &short_diag, windows.target_t, params.confidence)?;
    let radius = blend(rho_l, rho_c, params.alpha_c);

    Ok(Forecast {
        target_t: windows.target_t,
        point,
        rho_l,
        rho_c,
        radius,
        lower: point - radius,
        upper: point + radius,
        long_line,
        short_line,
    })
}
