use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tfbound(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfbound"))
        .args(args)
        .env("TFBOUND_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn tf_solve_table_starts_at_the_series_point() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&tfbound(dir.path(), &["tf-solve", "--no-cache"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,phi,dphi"));
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    assert!((first[0] - 1e-6).abs() < 1e-18);
    // φ(x) ≈ 1 − B x near the origin
    assert!((first[1] - (1.0 - 1.588071e-6)).abs() < 1e-8, "{}", first[1]);
    assert!((first[2] + 1.588).abs() < 5e-3, "{}", first[2]);
}

#[test]
fn energy_json_reports_the_total() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&tfbound(dir.path(), &["energy", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let total = v["total"].as_f64().unwrap();
    assert!((total + 0.768745).abs() < 5e-4, "{total}");
    let csv = stdout(&tfbound(dir.path(), &["energy"]));
    assert!(csv.starts_with("kinetic,attraction,hartree,total,"));
}

#[test]
fn single_charge_sweep_has_no_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    stdout(&tfbound(
        dir.path(),
        &["converge", "--z-list", "100", "--out", out.to_str().unwrap()],
    ));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.starts_with("Z,"));
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sweep_fit.json")).unwrap()).unwrap();
    assert!(fit["upper_intercept"].is_null());
    assert!(fit["lower_intercept"].is_null());
    assert!(dir.path().join("sweep_upper.dat").exists());
    assert!(dir.path().join("sweep_lower.dat").exists());
}

#[test]
fn warm_cache_reproduces_cold_output() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["tf-solve"][..],
        &["spectrum", "--Z", "100"],
        &["spectrum", "--Z", "100", "--format", "json"],
        &["bounds", "--Z", "100"],
    ] {
        let cold = stdout(&tfbound(dir.path(), args));
        let warm = stdout(&tfbound(dir.path(), args));
        let uncached = stdout(&tfbound(dir.path(), &[args, &["--no-cache"]].concat()));
        assert_eq!(cold, warm, "{args:?}");
        assert_eq!(cold, uncached, "{args:?}");
    }
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        let out = dir.path().join(format!("t{threads}.csv"));
        stdout(&tfbound(
            dir.path(),
            &[
                "converge",
                "--z-list",
                "100,200,400",
                "--no-cache",
                "--threads",
                threads,
                "--out",
                out.to_str().unwrap(),
            ],
        ));
        (
            fs::read(&out).unwrap(),
            fs::read(dir.path().join(format!("t{threads}_fit.json"))).unwrap(),
        )
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn corrupt_cache_entry_is_removed_and_reported() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&tfbound(dir.path(), &["bounds", "--Z", "100"]));
    let entry = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.file_name().unwrap().to_str().unwrap().starts_with("bounds-"))
        .expect("bounds entry cached");
    fs::write(&entry, b"{ not json").unwrap();
    let out = tfbound(dir.path(), &["bounds", "--Z", "100"]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error [cache]"), "{err}");
    assert!(!entry.exists());
    // the rerun recomputes
    stdout(&tfbound(dir.path(), &["bounds", "--Z", "100"]));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "alpha = -1.0\n").unwrap();
    let out = tfbound(dir.path(), &["bounds", "--Z", "100", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let out = tfbound(dir.path(), &["energy", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = tfbound(dir.path(), &["converge", "--z-list", "400,100"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tfbound(dir.path(), &["bounds"]);
    assert_eq!(out.status.code(), Some(2), "default sweep is not a single charge");
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "alpha = 0.5\nz_list = [100]\nformat = \"json\"\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file: serde_json::Value =
        serde_json::from_str(&stdout(&tfbound(dir.path(), &["bounds", "--config", c]))).unwrap();
    assert_eq!(from_file["lower"]["alpha"].as_f64(), Some(0.5));
    let overridden: serde_json::Value = serde_json::from_str(&stdout(&tfbound(
        dir.path(),
        &["bounds", "--config", c, "--alpha", "2"],
    )))
    .unwrap();
    assert_eq!(overridden["lower"]["alpha"].as_f64(), Some(2.0));
}
