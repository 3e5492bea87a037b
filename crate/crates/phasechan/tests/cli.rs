//! End-to-end tests of the `phasechan` binary: exit codes, output formats,
//! and agreement with the library routines.

use std::process::{Command, Output};

use phasechan::fock::choose_truncation;
use phasechan::infotheory::mutual_information;
use phasechan::receiver::{q_series, BinConvention, ReceiverKind};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasechan"))
        .args(args)
        .output()
        .expect("spawn phasechan")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parse the single data row of a CSV emission (skipping `#` metadata lines)
/// into (header, fields).
fn csv_row(text: &str) -> (Vec<String>, Vec<String>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let row = lines.next().unwrap().split(',').map(str::to_string).collect();
    (header, row)
}

fn field(text: &str, name: &str) -> String {
    let (header, row) = csv_row(text);
    let idx = header.iter().position(|h| h == name).unwrap_or_else(|| {
        panic!("no column '{name}' in {header:?}");
    });
    row[idx].clone()
}

#[test]
fn mi_matches_library_bit_for_bit() {
    let out = run(&["mi", "--n", "20", "--nbar", "3", "--tau", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let bits: f64 = field(&text, "bits").parse().unwrap();

    let trunc = choose_truncation(3.0, 1e-12).unwrap();
    let q = q_series(ReceiverKind::Canonical, 3.0, 20, 0.5, &trunc, BinConvention::Centered)
        .unwrap();
    let expected = mutual_information(&q).unwrap().bits;
    assert_eq!(bits, expected);
}

#[test]
fn mi_husimi_half_bin_json() {
    let out = run(&[
        "mi",
        "--receiver",
        "husimi-q",
        "--bin-offset",
        "half",
        "--nbar",
        "2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["meta"]["bin-convention"], "half-bin");
    let bits = doc["rows"][0]["bits"].as_f64().unwrap();

    let trunc = choose_truncation(2.0, 1e-12).unwrap();
    let q = q_series(ReceiverKind::HusimiQ, 2.0, 20, 0.0, &trunc, BinConvention::HalfBinOffset)
        .unwrap();
    assert_eq!(bits, mutual_information(&q).unwrap().bits);
}

#[test]
fn mi_monte_carlo_cross_check() {
    let out = run(&[
        "mi", "--nbar", "1", "--n", "8", "--samples", "100000", "--seed", "7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let bits: f64 = field(&text, "bits").parse().unwrap();
    let mc_bits: f64 = field(&text, "mc_bits").parse().unwrap();
    let dev: f64 = field(&text, "mc_max_dev").parse().unwrap();
    assert!((mc_bits - bits).abs() < 0.05, "mc {mc_bits} vs {bits}");
    assert!(dev < 0.01);

    // same seed, same numbers
    let again = run(&[
        "mi", "--nbar", "1", "--n", "8", "--samples", "100000", "--seed", "7",
    ]);
    assert_eq!(stdout(&out), stdout(&again));
}

#[test]
fn ou_flags_with_static_noise_are_usage_errors() {
    let out = run(&["mi", "--noise", "static", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["sigma", "--tau-e", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["mi", "--frequency", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sigma_resonant_ou_value() {
    let out = run(&[
        "sigma", "--noise", "ou", "--lambda", "1", "--tau-e", "1", "--tau", "1",
    ]);
    assert!(out.status.success());
    let sigma: f64 = field(&stdout(&out), "sigma").parse().unwrap();
    // lambda [tau - tau_e (1 - e^{-tau/tau_e})] at lambda = tau_e = tau = 1
    assert!((sigma - (-1.0f64).exp()).abs() < 1e-12);
}

#[test]
fn capacity_anchor_values() {
    let out = run(&["capacity", "--nbar", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(field(&text, "c_phn"), "2.0");
    assert_eq!(field(&text, "c_coh"), "1.0");
}

#[test]
fn scan_requires_a_sweep() {
    let out = run(&["scan"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_tau_sweep_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = run(&[
        "scan",
        "--nbar",
        "2",
        "--sweep",
        "tau=0:1:3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 4); // header + 3 rows
    let header: Vec<&str> = data[0].split(',').collect();
    let i_c_col = header.iter().position(|h| *h == "i_c").unwrap();
    let values: Vec<f64> = data[1..]
        .iter()
        .map(|l| l.split(',').nth(i_c_col).unwrap().parse().unwrap())
        .collect();
    assert!(values[0] > values[1] && values[1] > values[2]);
}

#[test]
fn scan_config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "nbar = 3\nn = 10\nsweep = tau=0.5\n").unwrap();
    let out = run(&[
        "scan",
        "--config",
        cfg.to_str().unwrap(),
        "--nbar",
        "2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["nbar"].as_f64().unwrap(), 2.0); // flag beats file
    assert_eq!(rows[0]["n"].as_u64().unwrap(), 10); // file beats default
    assert_eq!(rows[0]["tau"].as_f64().unwrap(), 0.5);
}

#[test]
fn figure_smoke_and_unknown_name() {
    let out = run(&["figure", "fig2", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["meta"]["figure"], "fig2");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 450);

    let bad = run(&["figure", "fig9"]);
    assert_eq!(bad.status.code(), Some(2));
}
