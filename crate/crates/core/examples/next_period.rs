//! Minimal library walkthrough: read one center's CSV and forecast the
//! period after its last observation. Mirrors the README example.

use popcast_core::{forecast_next, read_series_file, ForecastParams, Result};

fn main() -> Result<()> {
    let series = read_series_file("center.csv".as_ref())?;
    // Long window spans the whole series; target is the next period.
    let params = ForecastParams::new(series.first_t(), series.len(), 6, 0.5, 0.9)?;
    let fc = forecast_next(&series, &params)?;
    println!(
        "t={} -> {} in [{}, {}]",
        fc.target_t, fc.point, fc.lower, fc.upper
    );
    Ok(())
}
