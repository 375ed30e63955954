//! Exit-code and output-format checks for the command-line interface.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forecastkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Model grammar"));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_series_is_a_usage_error() {
    let out = run(&["acf"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--dataset"));
}

#[test]
fn unknown_dataset_is_an_application_error() {
    let out = run(&["stationarity", "--dataset", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown dataset"));
}

#[test]
fn acf_csv_has_one_row_per_lag() {
    let out = run(&["acf", "--dataset", "lynx", "--max-lag", "5", "--out", "csv"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lag,value,band_low,band_high"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn stationarity_reports_json_verdict() {
    let out = run(&["stationarity", "--dataset", "lynx", "--transform", "log10"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert!(parsed["test_statistic"].is_number());
    assert!(parsed["stationary"].is_boolean());
}

#[test]
fn fit_prints_model_coefficients() {
    let out = run(&[
        "fit",
        "--dataset",
        "qsales",
        "--model",
        "sarima:0,1,1:0,1,1:4",
        "--transform",
        "ln",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert!(parsed["theta"].is_array());
    assert!(parsed["sigma2"].is_number());
}

#[test]
fn fit_without_model_is_a_usage_error() {
    let out = run(&["fit", "--dataset", "lynx"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--model"));
}

#[test]
fn forecast_from_external_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.txt");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "# synthetic ramp with a wiggle").unwrap();
    for t in 0..40 {
        writeln!(file, "{}", 10.0 + 0.5 * t as f64 + (t as f64 * 0.7).sin()).unwrap();
    }
    drop(file);

    let out = run(&[
        "forecast",
        "--data",
        path.to_str().unwrap(),
        "--model",
        "ar:2",
        "--horizon",
        "3",
        "--out",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,forecast"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn evaluate_compares_two_files() {
    let dir = tempfile::tempdir().unwrap();
    let actual = dir.path().join("actual.txt");
    let forecast = dir.path().join("forecast.txt");
    std::fs::write(&actual, "1\n2\n3\n").unwrap();
    std::fs::write(&forecast, "2\n2\n2\n").unwrap();

    let out = run(&[
        "evaluate",
        "--actual",
        actual.to_str().unwrap(),
        "--forecast",
        forecast.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert!((parsed["mape"].as_f64().unwrap() - 400.0 / 9.0).abs() < 1e-9);
    assert_eq!(parsed["n"].as_u64(), Some(3));
}

#[test]
fn config_file_supplies_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(&config, "# defaults\ndataset = lynx\nout = csv\n").unwrap();

    let out = run(&["acf", "--config", config.to_str().unwrap(), "--max-lag", "3"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).starts_with("lag,value"));
}

#[test]
fn malformed_config_line_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.conf");
    std::fs::write(&config, "dataset lynx\n").unwrap();

    let out = run(&["acf", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("key=value"));
}

#[test]
fn reproduce_check_exits_three_when_a_gate_fails() {
    // The quarterly-sales table carries a seasonal-ARIMA gate that the
    // conditional-least-squares optimum genuinely misses, so --check is the
    // acceptance-failure exit path.
    let out = run(&["reproduce", "7.5", "--check"]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("[FAIL]"));
}
