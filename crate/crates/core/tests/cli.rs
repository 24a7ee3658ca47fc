use std::path::{Path, PathBuf};
use std::process::Command;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs").join(name)
}

fn run(args: &[&str], conf: &Path, out: &Path) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_thermoflux"))
        .args(args)
        .arg("--config")
        .arg(conf)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
        .status
        .code()
        .expect("exit code")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn solve_then_verify_on_zero_data() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["solve"], &config("zero_data.conf"), dir.path()), 0);
    for f in ["theta.csv", "phi.csv", "fields.vtk", "solve_report.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert_eq!(run(&["verify"], &config("zero_data.conf"), dir.path()), 0);
    let audit: serde_json::Value = serde_json::from_slice(&read(dir.path(), "audit_report.json")).unwrap();
    assert_eq!(audit["all_pass"], true);
}

#[test]
fn constants_report_is_written() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["constants"], &config("unit_bounds.conf"), dir.path()), 0);
    let text = String::from_utf8(read(dir.path(), "constants_report.txt")).unwrap();
    assert!(text.contains("p_max"));
    let json: serde_json::Value = serde_json::from_slice(&read(dir.path(), "constants_report.json")).unwrap();
    assert!(json.is_object());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b, c) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let conf = config("small_data.conf");
    assert_eq!(run(&["solve"], &conf, a.path()), 0);
    assert_eq!(run(&["solve"], &conf, b.path()), 0);
    assert_eq!(run(&["solve", "--set", "parallel=true"], &conf, c.path()), 0);
    for f in ["theta.csv", "phi.csv", "fields.vtk", "solve_report.json"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
        assert_eq!(read(a.path(), f), read(c.path(), f), "{f} (parallel)");
    }
    assert_eq!(run(&["constants"], &conf, a.path()), 0);
    assert_eq!(run(&["constants"], &conf, b.path()), 0);
    assert_eq!(read(a.path(), "constants_report.json"), read(b.path(), "constants_report.json"));
}

#[test]
fn input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["solve"], &dir.path().join("missing.conf"), dir.path()), 1);
    assert_eq!(run(&["solve", "--set", "no_such_key=1"], &config("zero_data.conf"), dir.path()), 1);
    assert_eq!(run(&["solve", "--set", "theta_e=sin("], &config("zero_data.conf"), dir.path()), 1);
    assert_eq!(run(&["bogus"], &config("zero_data.conf"), dir.path()), 1);
    // verify without a previous solve
    assert_eq!(run(&["verify"], &config("zero_data.conf"), dir.path()), 1);
}

#[test]
fn non_convergence_exits_2_and_keeps_fields() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["solve", "--set", "max_outer=1"], &config("small_data.conf"), dir.path()), 2);
    let report: serde_json::Value = serde_json::from_slice(&read(dir.path(), "solve_report.json")).unwrap();
    assert_eq!(report["report"]["converged"], false);
    assert!(dir.path().join("theta.csv").exists());
}

#[test]
fn missed_rates_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let conf = config("mms_linear.conf");
    assert_eq!(run(&["mms"], &conf, dir.path()), 0);
    assert_eq!(
        run(&["mms", "--set", "exact_theta=sin(pi*x)+2", "--set", "levels=2,4,8", "--set", "min_rate_h1=3"], &conf, dir.path()),
        3
    );
    let csv = String::from_utf8(read(dir.path(), "mms_rates.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}
