use std::path::Path;
use std::process::{Command, Output};

fn sharpbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharpbound")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_over_corpus_passes() {
    let o = sharpbound(&["check", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("inequality_id,subject,"));
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn deriv_sweep_prints_three_increasing_rows() {
    let o = sharpbound(&["sweep", "deriv", "--schedule", "1.1,1.01,1.001"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    let ratios: Vec<f64> = rows.iter().map(|l| l.split(',').nth(11).unwrap().parse().unwrap()).collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
}

#[test]
fn crescent_coefficients_written_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = sharpbound(&["coeffs", "crescent", "--a", "1", "--p", "-i", "--order", "8", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("coeffs_crescent.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let c0 = &v["coeffs"][0];
    assert!(c0[0].as_f64().unwrap().abs() < 1e-10);
    assert!((c0[1].as_f64().unwrap() - 8.0 / 3.0).abs() < 1e-10);
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 9);
    assert!(dir.path().join("coefficient_discrepancy.csv").exists());
}

#[test]
fn reports_are_byte_identical_across_runs_and_job_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, jobs) in [(a.path(), "1"), (b.path(), "4")] {
        let o = sharpbound(&["check", "--out", dir.to_str().unwrap(), "--jobs", jobs]);
        assert_eq!(o.status.code(), Some(0));
    }
    let read = |d: &Path, name: &str| std::fs::read(d.join(name)).unwrap();
    assert_eq!(read(a.path(), "report.csv"), read(b.path(), "report.csv"));
    assert_eq!(read(a.path(), "metadata.json"), read(b.path(), "metadata.json"));
}

#[test]
fn config_file_drives_a_run_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(
        &path,
        r#"{"kind": "sweep", "sweep": {"family": "increment", "n": 2, "schedule": [1.5, 1.05]}}"#,
    )
    .unwrap();
    let o = sharpbound(&["sweep", "increment", "--config", path.to_str().unwrap(), "--r", "0.25"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|l| l.starts_with("g_xi,2,,,1,0.25,")), "{text}");
}

#[test]
fn tight_tolerance_still_passes_but_failures_exit_one() {
    let o = sharpbound(&["check", "--entry", "z", "--tol", "1e-12"]);
    assert_eq!(o.status.code(), Some(0));
    // a domain too small for the image fails the containment hypothesis
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(
        &path,
        r#"{"kind": "check", "check": {"subjects": [{"function": {"name": "z"},
            "domain": {"variant": "disc", "center": [0, 0], "radius": 0.5}}]}}"#,
    )
    .unwrap();
    let o = sharpbound(&["check", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(sharpbound(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sharpbound(&["sweep", "deriv", "--r", "0.2", "--r-a", "0.5"]).status.code(), Some(2));
    assert_eq!(sharpbound(&["sweep", "deriv", "--schedule", "0.5"]).status.code(), Some(2));
    assert_eq!(sharpbound(&["coeffs", "crescent", "--p", "1-i"]).status.code(), Some(2));
    assert_eq!(sharpbound(&["check", "--entry", "nope"]).status.code(), Some(2));
    assert_eq!(sharpbound(&["check", "--config", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn corpus_lists_validated_entries() {
    let o = sharpbound(&["corpus"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() >= 7);
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn bohr_sweep_accepts_ratio_fractions() {
    let o = sharpbound(&["sweep", "bohr", "--r-fraction", "0.1,1/3", "--order", "64"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains(",0.3333333333333333,"));
}
