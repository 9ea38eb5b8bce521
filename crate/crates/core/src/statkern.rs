//! Statistical kernel: ordinary least squares over an observation window
//! and a self-contained two-tailed Student-t quantile.
//!
//! The quantile is implemented from scratch (log-gamma, regularized
//! incomplete beta, bracketed bisection) rather than pulled from a stats
//! crate, so the interval math has no external numeric dependencies.

use crate::error::{Error, Result};
use crate::series::Observation;

/// Fitted line `P(t) = intercept + slope·t` over one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionLine {
    /// Intercept A, in persons.
    pub intercept: f64,
    /// Slope B, in persons per period.
    pub slope: f64,
    /// First t of the fitted window.
    pub window_start_t: i64,
    /// Window length n. Always >= 3 so n-2 degrees of freedom exist.
    pub window_len: usize,
}

impl RegressionLine {
    /// Line value at period `t`.
    pub fn value_at(&self, t: i64) -> f64 {
        self.intercept + self.slope * t as f64
    }
}

/// Fit residual diagnostics needed by the prediction interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitDiagnostics {
    /// Sum of squared residuals over the window.
    pub sce: f64,
    /// Unbiased error-variance estimate, sce / (n-2).
    pub s_e2: f64,
    /// Mean of the window's t values.
    pub mean_t: f64,
    /// Sum of the window's squared t values.
    pub sum_t_sq: f64,
}

/// Neumaier-compensated accumulator. The period axis grows linearly, so
/// the t² sums grow cubically in the window length and the slope numerator
/// cancels heavily; plain f64 accumulation loses digits there.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.compensation
    }
}

/// Least-squares line through a window of observations.
///
/// Slope and intercept come from the closed-form normal equations
///   B = (n·ΣtP − Σt·ΣP) / (n·Σt² − (Σt)²),  A = P̄ − B·t̄,
/// with all sums accumulated in compensated arithmetic. Deterministic:
/// identical input bits give identical output bits.
pub fn fit_ols(window: &[Observation]) -> Result<(RegressionLine, FitDiagnostics)> {
    let n = window.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    for obs in window {
        if !obs.population.is_finite() {
            return Err(Error::Domain(format!(
                "population at t={} is not finite",
                obs.t
            )));
        }
    }

    let mut sum_t = CompensatedSum::default();
    let mut sum_p = CompensatedSum::default();
    let mut sum_tp = CompensatedSum::default();
    let mut sum_tt = CompensatedSum::default();
    for obs in window {
        let t = obs.t as f64;
        let p = obs.population;
        sum_t.add(t);
        sum_p.add(p);
        sum_tp.add(t * p);
        sum_tt.add(t * t);
    }
    let nf = n as f64;
    let (st, sp, stp, stt) = (sum_t.value(), sum_p.value(), sum_tp.value(), sum_tt.value());

    // t values are strictly increasing, so this is > 0.
    let denom = nf * stt - st * st;
    let slope = (nf * stp - st * sp) / denom;
    let mean_t = st / nf;
    let mean_p = sp / nf;
    let intercept = mean_p - slope * mean_t;

    let mut residual_sq = CompensatedSum::default();
    for obs in window {
        let r = obs.population - (intercept + slope * obs.t as f64);
        residual_sq.add(r * r);
    }
    let sce = residual_sq.value().max(0.0);
    let s_e2 = sce / (n - 2) as f64;

    Ok((
        RegressionLine {
            intercept,
            slope,
            window_start_t: window[0].t,
            window_len: n,
        },
        FitDiagnostics {
            sce,
            s_e2,
            mean_t,
            sum_t_sq: stt,
        },
    ))
}

/// Two-tailed Student-t quantile.
///
/// Returns q such that the t distribution with `df` degrees of freedom has
/// central mass `confidence` on [−q, q]; equivalently the one-tailed
/// quantile at (1+confidence)/2. Absolute accuracy is well inside 1e−8:
/// the CDF evaluates through the regularized incomplete beta to near
/// machine precision, and the root is bisected to an interval of 1e−12.
pub fn t_quantile(df: usize, confidence: f64) -> Result<f64> {
    if df < 1 {
        return Err(Error::Domain(format!(
            "degrees of freedom must be >= 1, got {df}"
        )));
    }
    if !confidence.is_finite() || confidence <= 0.0 || confidence >= 1.0 {
        return Err(Error::Domain(format!(
            "confidence must lie strictly inside (0, 1), got {confidence}"
        )));
    }

    // Grow the bracket geometrically from [0, 1] until it straddles the
    // root, then bisect. Unconditional convergence beats speed here.
    let mut hi = 1.0_f64;
    while student_t_central_mass(hi, df) < confidence {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Domain(format!(
                "quantile does not exist for confidence {confidence}"
            )));
        }
    }
    let mut lo = 0.0_f64;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval narrower than one ulp
        }
        if student_t_central_mass(mid, df) < confidence {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// P(−q <= T <= q) for T ~ Student-t with `df` degrees of freedom, q >= 0.
///
/// Uses the standard identity: the two-sided tail mass equals
/// I_x(df/2, 1/2) at x = df/(df + q²), so the central mass is its
/// complement.
fn student_t_central_mass(q: f64, df: usize) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    let v = df as f64;
    let x = v / (v + q * q);
    1.0 - reg_inc_beta(0.5 * v, 0.5, x)
}

/// Natural log of the gamma function, Lanczos approximation (g = 7).
// Published coefficients, kept with their full canonical digits.
#[allow(clippy::excessive_precision)]
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection keeps the approximation in its accurate half-plane.
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.999_999_999_999_809_93;
    for (i, c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta function I_x(a, b).
fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)
        + a * x.ln()
        + b * (1.0 - x).ln();
    let front = ln_front.exp();
    // The continued fraction converges fast only on one side of the mean;
    // use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the other.
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cont_frac(a, b, x) / a
    } else {
        1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b
    }
}

/// Continued-fraction core of the incomplete beta, evaluated with the
/// modified Lentz scheme.
fn beta_cont_frac(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const FPMIN: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let mf = m as f64;
        let m2 = 2.0 * mf;

        let even = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = 1.0 + even * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + even / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;

        let odd = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = 1.0 + odd * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + odd / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
