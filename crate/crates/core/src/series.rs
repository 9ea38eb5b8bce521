//! Population time series for a single care center, plus CSV ingestion.
//!
//! One CSV file per center, header `t,period,population`. The period index
//! `t` must be a run of consecutive positive integers; the period label is
//! opaque text; population is a non-negative real (monthly averages may be
//! fractional).

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Expected CSV header, in order.
pub const CSV_HEADER: [&str; 3] = ["t", "period", "population"];

/// One observed period for a center.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    /// 1-based period index.
    pub t: i64,
    /// Opaque period name, e.g. `2005-01`. Never parsed as a date.
    pub label: String,
    /// Observed population. Non-negative and finite.
    pub population: f64,
}

impl Observation {
    pub fn new(t: i64, label: impl Into<String>, population: f64) -> Result<Self> {
        if t < 1 {
            return Err(Error::Domain(format!("period index t must be >= 1, got {t}")));
        }
        if !population.is_finite() || population < 0.0 {
            return Err(Error::Domain(format!(
                "population must be a non-negative finite number, got {population}"
            )));
        }
        Ok(Observation {
            t,
            label: label.into(),
            population,
        })
    }
}

/// Ordered observations for one center. Immutable after construction;
/// `t` runs consecutively from the first observation with no gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSeries {
    center_id: String,
    observations: Vec<Observation>,
}

impl PopulationSeries {
    /// Validates and wraps a list of observations.
    ///
    /// The list must be non-empty and its t indices strictly consecutive.
    pub fn new(center_id: impl Into<String>, observations: Vec<Observation>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::Structure("series contains no data rows".into()));
        }
        for obs in &observations {
            // Re-check invariants so a hand-built Vec cannot smuggle in a
            // bad observation.
            Observation::new(obs.t, obs.label.clone(), obs.population)?;
        }
        for pair in observations.windows(2) {
            let (prev, next) = (&pair[0], &pair[1]);
            let expected = prev.t + 1;
            if next.t == expected {
                continue;
            }
            if next.t == prev.t {
                return Err(Error::Structure(format!("duplicate t={}", next.t)));
            }
            if next.t < prev.t {
                return Err(Error::Structure(format!(
                    "out-of-order t={} after t={}",
                    next.t, prev.t
                )));
            }
            return Err(Error::Structure(format!("gap at t={expected}")));
        }
        Ok(PopulationSeries {
            center_id: center_id.into(),
            observations,
        })
    }

    pub fn center_id(&self) -> &str {
        &self.center_id
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn first_t(&self) -> i64 {
        self.observations[0].t
    }

    pub fn last_t(&self) -> i64 {
        self.observations[self.observations.len() - 1].t
    }

    /// Population at period `t`, if observed.
    pub fn value_at(&self, t: i64) -> Option<f64> {
        if t < self.first_t() || t > self.last_t() {
            return None;
        }
        Some(self.observations[(t - self.first_t()) as usize].population)
    }

    /// Exactly `count` consecutive observations starting at `start_t`.
    ///
    /// This is the window primitive every fit is built on; it fails rather
    /// than silently truncating when the request leaves the observed span.
    pub fn slice_window(&self, start_t: i64, count: usize) -> Result<&[Observation]> {
        if count < 1 {
            return Err(Error::Domain("window length must be >= 1".into()));
        }
        if start_t < self.first_t() {
            return Err(Error::Range(format!(
                "window start t={} precedes first observation t={}",
                start_t,
                self.first_t()
            )));
        }
        let end_t = start_t + (count as i64 - 1);
        if end_t > self.last_t() {
            return Err(Error::Range(format!(
                "window end t={} exceeds last observation t={}",
                end_t,
                self.last_t()
            )));
        }
        let offset = (start_t - self.first_t()) as usize;
        Ok(&self.observations[offset..offset + count])
    }
}

/// Reads one center's series from CSV text.
///
/// The header row must be exactly `t,period,population`. Cell-level
/// problems are reported with the 1-based line number of the file.
pub fn parse_series<R: Read>(reader: R, center_id: &str) -> Result<PopulationSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);

    let header = rdr
        .headers()
        .map_err(|e| csv_error_to_parse(&e))?
        .clone();
    // Numeric cells tolerate surrounding whitespace; the label cell is
    // kept verbatim so write→parse round-trips exactly.
    let header_fields: Vec<&str> = header.iter().map(str::trim).collect();
    if header_fields != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "header must be `t,period,population`, got `{}`",
                header_fields.join(",")
            ),
        });
    }

    let mut observations = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error_to_parse(&e))?;
        let line = record.position().map_or(0, |p| p.line());
        let t: i64 = record[0].trim().parse().map_err(|_| Error::Parse {
            line,
            message: format!("t is not an integer: \"{}\"", &record[0]),
        })?;
        let population: f64 = record[2].trim().parse().map_err(|_| Error::Parse {
            line,
            message: format!("population is not a number: \"{}\"", &record[2]),
        })?;
        let label = record[1].to_string();
        let obs = Observation::new(t, label, population).map_err(|e| match e {
            Error::Domain(msg) => Error::Domain(format!("{msg} (line {line})")),
            other => other,
        })?;
        observations.push(obs);
    }

    PopulationSeries::new(center_id, observations)
}

fn csv_error_to_parse(err: &csv::Error) -> Error {
    let line = err
        .position()
        .map_or(0, |p| p.line());
    match err.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => Error::Parse {
            line,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        _ => Error::Parse {
            line,
            message: err.to_string(),
        },
    }
}

/// Writes a series back out in the same CSV schema `parse_series` reads.
///
/// Populations are printed with shortest round-trip formatting, so
/// parse → write → parse is lossless on (t, label, population).
pub fn write_series<W: Write>(series: &PopulationSeries, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(CSV_HEADER)
        .map_err(csv_write_error)?;
    for obs in series.observations() {
        wtr.write_record([
            obs.t.to_string(),
            obs.label.clone(),
            obs.population.to_string(),
        ])
        .map_err(csv_write_error)?;
    }
    wtr.flush()?;
    Ok(())
}

fn csv_write_error(err: csv::Error) -> Error {
    match err.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Structure(format!("csv write failed: {other:?}")),
    }
}

/// Opens a CSV file and parses it; the center id is the file stem.
pub fn read_series_file(path: &Path) -> Result<PopulationSeries> {
    let center_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned());
    let file = File::open(path)
        .map_err(|e| Error::from(e).context(format!("while opening {}", path.display())))?;
    parse_series(file, &center_id)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(t: i64, population: f64) -> Observation {
        Observation::new(t, format!("p{t}"), population).unwrap()
    }

    #[test]
    fn minimal_two_row_file() {
        let csv = "t,period,population\n1,2005-enero,100\n2,2005-febrero,103\n";
        let series = parse_series(csv.as_bytes(), "c1").unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series.first_t(), 1);
        assert_eq!(series.last_t(), 2);
        assert_eq!(series.value_at(2), Some(103.0));
        assert_eq!(series.observations()[0].label, "2005-enero");
    }

    #[test]
    fn gap_is_reported_at_the_missing_index() {
        let csv = "t,period,population\n1,a,1\n2,b,2\n4,d,4\n";
        let err = parse_series(csv.as_bytes(), "c1").unwrap_err();
        match err {
            Error::Structure(msg) => assert!(msg.contains("gap at t=3"), "msg: {msg}"),
            other => panic!("expected structural error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_t_is_structural() {
        let csv = "t,period,population\n1,a,1\n1,a,1\n";
        let err = parse_series(csv.as_bytes(), "c1").unwrap_err();
        assert!(matches!(err, Error::Structure(m) if m.contains("duplicate t=1")));
    }

    #[test]
    fn long_file_parses_in_full() {
        let mut csv = String::from("t,period,population\n");
        for t in 1..=63 {
            csv.push_str(&format!("{t},m{t},{}\n", 100 + t));
        }
        let series = parse_series(csv.as_bytes(), "c1").unwrap();
        assert_eq!(series.len(), 63);
        assert_eq!(series.last_t(), 63);
    }

    #[test]
    fn bad_population_cell_names_the_line() {
        let csv = "t,period,population\n1,a,100\n2,b,oops\n";
        let err = parse_series(csv.as_bytes(), "c1").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("oops"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_t_cell_names_the_line() {
        let csv = "t,period,population\nx,a,100\n";
        let err = parse_series(csv.as_bytes(), "c1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn wrong_arity_is_a_parse_error() {
        let csv = "t,period,population\n1,a\n";
        let err = parse_series(csv.as_bytes(), "c1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn negative_population_is_a_domain_error() {
        let csv = "t,period,population\n1,a,-5\n";
        let err = parse_series(csv.as_bytes(), "c1").unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn empty_data_is_structural() {
        let csv = "t,period,population\n";
        let err = parse_series(csv.as_bytes(), "c1").unwrap_err();
        assert!(matches!(err, Error::Structure(_)));
    }

    #[test]
    fn wrong_header_is_rejected() {
        let csv = "time,name,pop\n1,a,1\n";
        let err = parse_series(csv.as_bytes(), "c1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn crlf_input_is_accepted() {
        let csv = "t,period,population\r\n1,a,100\r\n2,b,101\r\n";
        let series = parse_series(csv.as_bytes(), "c1").unwrap();
        assert_eq!(series.len(), 2);
    }

    #[test]
    fn series_may_start_after_t1() {
        let series =
            PopulationSeries::new("c", vec![obs(5, 10.0), obs(6, 11.0), obs(7, 12.0)]).unwrap();
        assert_eq!(series.first_t(), 5);
        assert_eq!(series.value_at(6), Some(11.0));
        assert_eq!(series.value_at(4), None);
    }

    #[test]
    fn slice_window_prefix() {
        let obs63: Vec<Observation> = (1..=63).map(|t| obs(t, t as f64)).collect();
        let series = PopulationSeries::new("c", obs63).unwrap();
        let w = series.slice_window(1, 10).unwrap();
        assert_eq!(w.len(), 10);
        assert_eq!(w[0].t, 1);
        assert_eq!(w[9].t, 10);
    }

    #[test]
    fn slice_window_interior() {
        let obs63: Vec<Observation> = (1..=63).map(|t| obs(t, t as f64)).collect();
        let series = PopulationSeries::new("c", obs63).unwrap();
        let w = series.slice_window(5, 6).unwrap();
        let ts: Vec<i64> = w.iter().map(|o| o.t).collect();
        assert_eq!(ts, vec![5, 6, 7, 8, 9, 10]);
    }

    #[test]
    fn slice_window_past_end_names_the_bound() {
        let obs10: Vec<Observation> = (1..=10).map(|t| obs(t, t as f64)).collect();
        let series = PopulationSeries::new("c", obs10).unwrap();
        let err = series.slice_window(8, 6).unwrap_err();
        match err {
            Error::Range(msg) => {
                assert!(msg.contains("t=13"), "msg: {msg}");
                assert!(msg.contains("t=10"), "msg: {msg}");
            }
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn slice_window_before_start_names_the_bound() {
        let obs10: Vec<Observation> = (5..=10).map(|t| obs(t, t as f64)).collect();
        let series = PopulationSeries::new("c", obs10).unwrap();
        let err = series.slice_window(3, 4).unwrap_err();
        assert!(matches!(err, Error::Range(m) if m.contains("t=3") && m.contains("t=5")));
    }

    #[test]
    fn round_trip_is_lossless() {
        let original = PopulationSeries::new(
            "c7",
            vec![
                Observation::new(1, "2005-01", 100.25).unwrap(),
                Observation::new(2, "2005-02", 103.0).unwrap(),
                Observation::new(3, "label, with comma", 0.1).unwrap(),
            ],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_series(&original, &mut buf).unwrap();
        let reread = parse_series(buf.as_slice(), "c7").unwrap();
        assert_eq!(original, reread);
    }
}
