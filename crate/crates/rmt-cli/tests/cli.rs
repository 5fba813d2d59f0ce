//! End-to-end tests of the `rmt` binary: flags, exit codes, determinism.

use std::process::{Command, Output};

fn rmt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmt"))
        .args(args)
        .env_remove("RMT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn hiz_series_exact_fractions() {
    let out = rmt(&["hiz-series", "--beta", "1", "--k", "2", "--order", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in ["0,1", "1,1", "2,2", "3,6", "4,24", "5,120"] {
        assert!(text.contains(&format!("\n{line}\n")), "missing {line} in {text}");
    }
    // Non-integer coefficients are emitted as exact fractions.
    let out = rmt(&["hiz-series", "--beta", "1", "--k", "1", "--order", "2"]);
    let text = stdout(&out);
    assert!(text.contains("1,1/4") && text.contains("2,9/32"), "{text}");
}

#[test]
fn spacing_goe_starts_near_one() {
    let out = rmt(&[
        "spacing", "--ensemble", "goe", "--route", "ode", "--smax", "2", "--points", "40",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# route = Ode"));
    let first = text
        .lines()
        .find(|l| !l.starts_with('#') && !l.starts_with("s,"))
        .expect("data row");
    let e: f64 = first.split(',').nth(1).unwrap().parse().unwrap();
    assert!((e - 1.0).abs() < 0.06, "E(0+) = {e}");
}

#[test]
fn density_is_byte_identical_across_runs() {
    let args = [
        "density", "--beta", "4", "--n", "30", "--samples", "40", "--seed", "7",
    ];
    let a = rmt(&args);
    let b = rmt(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("# seed = 7"));
    // A different seed must change the histogram.
    let c = rmt(&[
        "density", "--beta", "4", "--n", "30", "--samples", "40", "--seed", "8",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn worker_count_does_not_change_output() {
    let base = [
        "density", "--beta", "1", "--n", "25", "--samples", "30", "--seed", "11",
    ];
    let a = rmt(&base);
    let mut with_workers: Vec<&str> = base.to_vec();
    with_workers.extend_from_slice(&["--workers", "1"]);
    let b = rmt(&with_workers);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_env_fallback() {
    let out = Command::new(env!("CARGO_BIN_EXE_rmt"))
        .args(["density", "--beta", "2", "--n", "10", "--samples", "5"])
        .env("RMT_SEED", "42")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("# seed = 42"));
}

#[test]
fn usage_error_exit_code_and_message() {
    let out = rmt(&["density", "--no-such-flag", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--no-such-flag"), "stderr: {err}");
}

#[test]
fn validate_single_criterion_exit_codes() {
    let ok = rmt(&["validate", "--criterion", "1"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("[PASS]"));
    let bad = rmt(&["validate", "--criterion", "99"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn config_file_mirrors_flags() {
    let dir = std::env::temp_dir().join("rmt-cli-test-config");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.json");
    std::fs::write(&path, r#"{"beta": 1, "k": 1, "order": 2}"#).unwrap();
    let out = rmt(&["hiz-series", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("2,9/32"));
    // Explicit flags override the config.
    let out = rmt(&[
        "hiz-series", "--config", path.to_str().unwrap(), "--k", "2",
    ]);
    assert!(stdout(&out).contains("2,2"));
}

#[test]
fn json_format_and_output_file() {
    let dir = std::env::temp_dir().join("rmt-cli-test-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kernel.json");
    let out = rmt(&[
        "kernel", "--kind", "rho2-gue", "--points", "4", "--format", "json", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["columns"][0], "x");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn pastur_two_atom_and_source_conflict() {
    let dir = std::env::temp_dir().join("rmt-cli-test-src");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("src.json");
    std::fs::write(&path, r#"{"atoms": [{"a": 0.0, "w": 1.0}]}"#).unwrap();
    let ok = rmt(&[
        "pastur", "--source", path.to_str().unwrap(), "--points", "3", "--xmin", "-1",
        "--xmax", "1",
    ]);
    assert!(ok.status.success());
    let both = rmt(&[
        "pastur", "--source", path.to_str().unwrap(), "--two-atom", "0.5",
    ]);
    assert_eq!(both.status.code(), Some(1));
}
