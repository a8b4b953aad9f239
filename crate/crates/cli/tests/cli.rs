use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use symclose_core::{lines_witness, RunConfig};
use tempfile::TempDir;

fn symclose(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_symclose"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("SYMCLOSE_THREADS", t),
        None => cmd.env_remove("SYMCLOSE_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const DUOCYLINDER: &str = r#"{"n": 4, "mode": "rotation",
  "subspaces": [[[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [0, 0, 0, 1]]]}"#;

#[test]
fn generated_witness_round_trips_and_checks() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("w.json");
    let out = symclose(&["generate", "3", "1", "lines", "-o", p(&path)], None);
    assert_eq!(code(&out), 0);
    let cfg = RunConfig::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let witness = lines_witness(3).unwrap();
    for (a, b) in cfg.family().unwrap().iter().zip(&witness.subspaces) {
        assert!(a.approx_eq(b));
    }
    let out = symclose(&["check", p(&path)], None);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["condition_report"]["overall"], "pass");

    let out = symclose(&["generate", "4", "2", "reflection"], None);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["subspaces"].as_array().unwrap().len(), 3);
}

#[test]
fn input_errors_exit_three() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"n": 3, "mode": "lines", "subspaces": [[[1, 0]]]}"#);
    let out = symclose(&["check", p(&bad)], None);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("subspaces[0][0]"));

    let out = symclose(&["generate", "3", "2", "reflection"], None);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("hyperplanes"));

    let duo = write(&dir, "duo.json", DUOCYLINDER);
    assert_eq!(code(&symclose(&["closure", p(&duo)], None)), 3);
    assert_eq!(code(&symclose(&["check", p(&duo)], Some("0"))), 3);
    assert_eq!(code(&symclose(&["check", "/nonexistent/config.json"], None)), 3);
    assert_eq!(code(&symclose(&["orbit", p(&duo), "--budget", "0"], None)), 3);
    assert_eq!(code(&symclose(&["frobnicate"], None)), 3);
}

#[test]
fn duocylinder_exit_codes() {
    let dir = TempDir::new().unwrap();
    let duo = write(&dir, "duo.json", DUOCYLINDER);
    let out = symclose(&["check", p(&duo)], None);
    assert_eq!(code(&out), 1);
    let witness = &report(&out)["condition_report"]["hypotheses"][1]["verdict"];
    assert_eq!(witness["status"], "fail");
    assert_eq!(witness["evidence"]["kind"], "bipartition");
    assert_eq!(witness["evidence"]["left"], serde_json::json!([0]));
    assert_eq!(witness["evidence"]["right"], serde_json::json!([1]));

    assert_eq!(code(&symclose(&["orbit", p(&duo), "--budget", "10"], None)), 2);
    assert_eq!(code(&symclose(&["orbit", p(&duo), "--budget", "5000"], None)), 1);
}

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn orbit_reports_are_reproducible_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("rot.json");
    assert_eq!(code(&symclose(&["generate", "3", "1", "rotation", "-o", p(&cfg)], None)), 0);
    let args = ["orbit", p(&cfg), "--budget", "20000", "--probes", "500", "--seed", "4"];
    let one = symclose(&args, Some("1"));
    let three = symclose(&args, Some("3"));
    assert_eq!(code(&one), 0);
    assert_eq!(without_wall_time(report(&one)), without_wall_time(report(&three)));

    // the echoed config alone reproduces the run
    let echoed = write(&dir, "echo.json", &serde_json::to_string(&report(&one)["config"]).unwrap());
    let again = symclose(&["orbit", p(&echoed)], None);
    assert_eq!(report(&again)["density_report"], report(&one)["density_report"]);
}

#[test]
fn csv_export_has_one_full_precision_row_per_point() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("lines.json");
    let csv = dir.path().join("pts.csv");
    assert_eq!(code(&symclose(&["generate", "3", "1", "lines", "-o", p(&cfg)], None)), 0);
    let out = symclose(&["orbit", p(&cfg), "--budget", "1500", "--probes", "100", "--threshold", "0.5", "--export", p(&csv)], None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.ends_with('\n') && !text.contains('\r'));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 1500);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 3);
        let norm: f64 = fields.iter().map(|f| f.parse::<f64>().unwrap().powi(2)).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        for f in fields {
            let mantissa = f.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.replace('.', "").len(), 17, "{f}");
        }
    }
}

#[test]
fn closure_and_certify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let d4 = write(&dir, "d4.json", &format!(r#"{{"n": 2, "mode": "reflection", "subspaces": [[[1, 0]], [[{c}, {c}]]]}}"#));
    let out = symclose(&["closure", p(&d4)], None);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["finite_closure_report"]["outcome"]["order"], 8);

    let irr = write(&dir, "irr.json", r#"{"n": 2, "mode": "lines", "subspaces": [[[1, 0]], [["1/3", 0.9428090415820634]]]}"#);
    assert_eq!(code(&symclose(&["closure", p(&irr)], None)), 0);

    assert_eq!(code(&symclose(&["certify", "--cos", "1/3"], None)), 0);
    let out = symclose(&["certify", "--cos", "1/2"], None);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["certificate"]["status"]["multiple"], "1/3");
    assert_eq!(code(&symclose(&["certify", "--cos", "5/3"], None)), 3);

    let angles = write(&dir, "angles.txt", "acos(1/3)\nacos(1/5)\n");
    assert_eq!(code(&symclose(&["certify", "--angles-file", p(&angles)], None)), 0);
    let related = write(&dir, "related.json", r#"["acos(1/3)", "acos(-7/9)"]"#);
    let out = symclose(&["certify", "--angles-file", p(&related)], None);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["independence"]["relation_found"], serde_json::json!([0, 2, -1]));
}
