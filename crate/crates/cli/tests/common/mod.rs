//! Helpers shared by the CLI test targets: running the binary, comparing
//! against golden files, and the reusable contract checks.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const BIN: &str = env!("CARGO_BIN_EXE_popcast");

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn golden_path(name: &str) -> String {
    golden_dir().join(name).to_string_lossy().into_owned()
}

pub fn read_golden(name: &str) -> String {
    let path = golden_dir().join(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read golden {}: {e}", path.display()))
}

pub fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("failed to launch the popcast binary")
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .current_dir(dir)
        .args(args)
        .output()
        .expect("failed to launch the popcast binary")
}

pub fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

pub fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

pub fn code_of(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

/// Golden stdout cases for forecast and backtest (inputs are committed
/// fixtures, so these run anywhere).
pub fn golden_stdout_cases() -> Vec<(&'static str, Vec<String>, &'static str)> {
    let fixture = golden_path("fixture.csv");
    let linear = golden_path("linear_a.csv");
    let noisy = golden_path("noisy_b.csv");
    let forecast = |format: &str| {
        vec![
            "forecast".to_string(),
            "--input".into(),
            fixture.clone(),
            "--il".into(),
            "1".into(),
            "--nl".into(),
            "10".into(),
            "--nc".into(),
            "6".into(),
            "--alpha-c".into(),
            "0.5".into(),
            "--confidence".into(),
            "0.9".into(),
            "--format".into(),
            format.to_string(),
        ]
    };
    let backtest = |format: &str| {
        vec![
            "backtest".to_string(),
            "--input".into(),
            linear.clone(),
            "--input".into(),
            noisy.clone(),
            "--il".into(),
            "1".into(),
            "--nc".into(),
            "6".into(),
            "--alpha-c".into(),
            "0.5".into(),
            "--confidence".into(),
            "0.9".into(),
            "--targets".into(),
            "11..30".into(),
            "--format".into(),
            format.to_string(),
        ]
    };
    vec![
        ("forecast human", forecast("human"), "forecast_human.txt"),
        ("forecast structured", forecast("structured"), "forecast_structured.txt"),
        ("forecast plot-table", forecast("plot-table"), "forecast_plot_table.txt"),
        ("backtest human", backtest("human"), "backtest_human.txt"),
        ("backtest structured", backtest("structured"), "backtest_structured.txt"),
        ("backtest plot-table", backtest("plot-table"), "backtest_plot_table.txt"),
    ]
}

pub fn check_golden_stdout(label: &str, args: &[String], golden: &str) {
    let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = run(&arg_refs);
    assert_eq!(code_of(&out), 0, "{label}: nonzero exit, stderr: {}", stderr_of(&out));
    let actual = stdout_of(&out);
    let expected = read_golden(golden);
    assert_eq!(actual, expected, "{label}: stdout diverged from {golden}");
}

/// Runs synth in a fresh directory and compares the stdout summary and
/// both written CSV files against their goldens.
pub fn check_synth_golden(format: &str, stdout_golden: &str) {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = run_in(
        dir.path(),
        &[
            "synth", "--output", "data", "--centers", "2", "--periods", "8", "--seed", "7",
            "--noise", "0.5", "--shocks", "0.25", "--format", format,
        ],
    );
    assert_eq!(code_of(&out), 0, "synth {format}: stderr: {}", stderr_of(&out));
    assert_eq!(
        stdout_of(&out),
        read_golden(stdout_golden),
        "synth {format}: stdout diverged from {stdout_golden}"
    );
    for name in ["center_01", "center_02"] {
        let written = std::fs::read_to_string(dir.path().join(format!("data/{name}.csv")))
            .expect("generated csv exists");
        assert_eq!(
            written,
            read_golden(&format!("synth_{name}.csv")),
            "synth {format}: {name}.csv bytes diverged"
        );
    }
}

/// The exit-code contract: 0 success, 1 input/domain, 2 range/insufficient.
pub fn check_exit_code_table() {
    let dir = tempfile::tempdir().expect("tempdir");
    let gap = dir.path().join("gap.csv");
    std::fs::write(&gap, "t,period,population\n1,a,10\n2,b,11\n4,d,13\n").unwrap();
    let gap = gap.to_string_lossy().into_owned();
    let fixture = golden_path("fixture.csv");

    // 0: success
    let ok = run(&["forecast", "--input", &fixture]);
    assert_eq!(code_of(&ok), 0);
    // 0: help and version
    assert_eq!(code_of(&run(&["--help"])), 0);
    assert_eq!(code_of(&run(&["--version"])), 0);

    // 1: structural error in the input file, message names the gap
    let g = run(&["forecast", "--input", &gap]);
    assert_eq!(code_of(&g), 1);
    assert!(stderr_of(&g).contains("gap at t=3"), "stderr: {}", stderr_of(&g));

    // 1: domain error from a bad parameter
    let a = run(&["forecast", "--input", &fixture, "--alpha-c", "1.5"]);
    assert_eq!(code_of(&a), 1);
    assert!(stderr_of(&a).contains("alpha_c"));

    // 1: missing input file
    let m = run(&["forecast", "--input", "/nonexistent/nowhere.csv"]);
    assert_eq!(code_of(&m), 1);

    // 1: unparseable flag value and unknown flag
    assert_eq!(code_of(&run(&["backtest", "--input", &fixture, "--targets", "nope"])), 1);
    assert_eq!(code_of(&run(&["forecast", "--nonsense"])), 1);

    // 2: long window longer than the series
    let r = run(&["forecast", "--input", &fixture, "--nl", "99"]);
    assert_eq!(code_of(&r), 2);
    assert!(stderr_of(&r).contains("range error"));

    // 2: backtest targets past the last observation
    let b = run(&["backtest", "--input", &fixture, "--targets", "11..63"]);
    assert_eq!(code_of(&b), 2);
}

/// Structured backtest output parses back to the library's numbers
/// bit for bit.
pub fn check_structured_round_trip() {
    use popcast_core::{read_series_file, run_backtest, BacktestProtocol};

    let linear = golden_path("linear_a.csv");
    let noisy = golden_path("noisy_b.csv");
    let out = run(&[
        "backtest", "--input", &linear, "--input", &noisy, "--il", "1", "--nc", "6",
        "--alpha-c", "0.5", "--confidence", "0.9", "--targets", "11..30",
        "--format", "structured",
    ]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);

    let protocol = BacktestProtocol {
        i_l: 1,
        n_c: 6,
        alpha_c: 0.5,
        confidence: 0.9,
        first_target_t: 11,
        last_target_t: 30,
    };
    let reports: Vec<_> = [&linear, &noisy]
        .iter()
        .map(|p| run_backtest(&read_series_file(Path::new(p)).unwrap(), &protocol).unwrap())
        .collect();
    let mut expected_records = reports.iter().flat_map(|r| r.records.iter());

    let mut record_lines = 0usize;
    for line in text.lines() {
        let Some(rest) = line.strip_prefix("record: ") else {
            continue;
        };
        record_lines += 1;
        let fields: Vec<&str> = rest.split('\t').collect();
        assert_eq!(fields.len(), 11, "record arity: {line}");
        let rec = expected_records.next().expect("more records than expected");

        let parse = |s: &str| -> f64 { s.parse().unwrap() };
        // Full-precision printing means parsing recovers the exact f64.
        assert_eq!(fields[1].parse::<i64>().unwrap(), rec.target_t);
        assert_eq!(parse(fields[2]).to_bits(), rec.actual.to_bits(), "actual: {line}");
        assert_eq!(parse(fields[3]).to_bits(), rec.forecast.point.to_bits(), "point: {line}");
        assert_eq!(parse(fields[4]).to_bits(), rec.forecast.lower.to_bits(), "lower: {line}");
        assert_eq!(parse(fields[5]).to_bits(), rec.forecast.upper.to_bits(), "upper: {line}");
        assert_eq!(parse(fields[6]).to_bits(), rec.forecast.rho_l.to_bits(), "rho_long: {line}");
        assert_eq!(parse(fields[7]).to_bits(), rec.forecast.rho_c.to_bits(), "rho_short: {line}");
        assert_eq!(parse(fields[8]).to_bits(), rec.forecast.radius.to_bits(), "radius: {line}");
        assert_eq!(fields[9].parse::<bool>().unwrap(), rec.hit);
        assert_eq!(fields[10].parse::<bool>().unwrap(), rec.short_window_clamped);
    }
    assert_eq!(record_lines, 40, "expected 40 record lines");
    assert!(expected_records.next().is_none(), "fewer records than expected");

    // Aggregate counters round-trip too.
    let total_failures: usize = reports.iter().map(|r| r.failures).sum();
    let failure_rate = total_failures as f64 / 40.0;
    assert!(text.contains("runs: 40"));
    assert!(text.contains(&format!("failures: {total_failures}")));
    let rate_line = text
        .lines()
        .find(|l| l.starts_with("failure_rate: "))
        .expect("failure_rate line");
    let parsed: f64 = rate_line["failure_rate: ".len()..].parse().unwrap();
    assert_eq!(parsed.to_bits(), failure_rate.to_bits());
}
