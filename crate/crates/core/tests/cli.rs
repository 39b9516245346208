use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const ISO: &str = r#"{"variant":"comp_iso","S":[[[0,0],[1,0]],[[1,0],[0,0]]],"sigma":{"lambda":[0,1],"a":[0.3,0.1]}}"#;
const REFLECTION: &str = r#"{"variant":"comp_iso","S":[[[0,0],[1,0]],[[1,0],[0,0]]],"sigma":{"lambda":[-1,0],"a":[0.2,-0.4]}}"#;
const GROUP: &str = r#"{"variant":"group","V":[[[1,0],[0,0]],[[0,0],[2,0]]],"flow":{"kind":"elliptic","c":0.5,"tau":[0.2,0]}}"#;
const QUICK: &str = r#"{"space":{"d":2,"p":3},"grid":{"n_radii":40,"n_angles":48,"refinement_rounds":2},
    "basis_degree":3,"random_polynomials":2,"isometry_samples":4}"#;

fn bloch(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bloch"))
        .args(args)
        .current_dir(dir)
        .env_remove("BLOCH_LAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn workdir() -> tempfile::TempDir {
    let d = tempfile::tempdir().unwrap();
    let files = [
        ("space.json", r#"{"d":2,"p":3}"#),
        ("iso.json", ISO),
        ("refl.json", REFLECTION),
        ("group.json", GROUP),
        ("quick.json", QUICK),
        ("witness.json", r#"{"variant":"witness","z0":[0.5,0.2],"e":[[1,0],[0,0]]}"#),
        ("flow.json", r#"{"kind":"hyperbolic","c":1,"alpha":[1,0],"beta":[-1,0]}"#),
    ];
    for (name, text) in files {
        fs::write(d.path().join(name), text).unwrap();
    }
    fs::write(d.path().join("gbp.json"), format!(r#"{{"variant":"gbp","T":{REFLECTION}}}"#)).unwrap();
    fs::write(d.path().join("bad_gbp.json"), format!(r#"{{"variant":"gbp","T":{ISO}}}"#)).unwrap();
    d
}

#[test]
fn disc_suite_json_lines() {
    let w = workdir();
    let o = bloch(&["suite", "--suite", "disc", "--json"], w.path());
    assert!(o.status.success());
    let ls = lines(&o);
    assert_eq!(ls[0]["type"], "coverage");
    let summary = ls.last().unwrap();
    assert_eq!(summary["type"], "summary");
    assert_eq!(summary["pass"], true);
    let reports = &ls[1..ls.len() - 1];
    assert!(reports.len() >= 5);
    assert!(reports.iter().all(|r| r["pass"] == true && r["wall_time_ms"] == 0));
}

#[test]
fn seed_flag_and_environment() {
    let w = workdir();
    let o = bloch(&["suite", "--suite", "disc", "--json", "--seed", "7"], w.path());
    assert_eq!(lines(&o)[0]["seed"], 7);
    let o = Command::new(env!("CARGO_BIN_EXE_bloch"))
        .args(["suite", "--suite", "disc", "--json", "--seed", "7"])
        .env("BLOCH_LAB_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(lines(&o)[0]["seed"], 9);
    assert!(lines(&o)[1..].iter().filter(|r| r.get("seed").is_some()).all(|r| r["seed"] == 9));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let w = workdir();
    let a = bloch(&["suite", "--config", "quick.json", "--json"], w.path());
    let b = bloch(&["suite", "--config", "quick.json", "--json"], w.path());
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn errors_exit_with_two() {
    let w = workdir();
    let o = bloch(&["suite", "--suite", "nope"], w.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));

    fs::write(w.path().join("bad.json"), r#"{"seed":1,"extra":true}"#).unwrap();
    let o = bloch(&["suite", "--config", "bad.json"], w.path());
    assert_eq!(o.status.code(), Some(2));

    let o = bloch(&["verify-gbp", "--space", "space.json", "--op", "bad_gbp.json"], w.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a reflection"));
}

#[test]
fn norm_of_a_witness() {
    let w = workdir();
    let o = bloch(&["norm", "--space", "space.json", "--fn", "witness.json"], w.path());
    assert!(o.status.success());
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((v["argmax"][0].as_f64().unwrap() - 0.5).abs() < 1e-3);
    let o = bloch(&["norm", "--space", "space.json", "--fn", "witness.json", "--star"], w.path());
    let s: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((s["value"].as_f64().unwrap() - v["value"].as_f64().unwrap()).abs() < 1e-15);
}

#[test]
fn verify_verbs_pass_on_valid_descriptors() {
    let w = workdir();
    for args in [
        vec!["verify-isometry", "--space", "space.json", "--op", "iso.json"],
        vec!["verify-group", "--space", "space.json", "--op", "group.json"],
        vec!["verify-generator", "--space", "space.json", "--op", "group.json"],
        vec!["verify-gbp", "--space", "space.json", "--op", "gbp.json"],
        vec!["falsify-gbp", "--space", "space.json", "--op", "refl.json"],
        vec!["falsify-gbp", "--space", "space.json", "--op", "iso.json"],
    ] {
        let o = bloch(&args, w.path());
        assert!(o.status.success(), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains("[PASS]"));
    }
}

#[test]
fn falsify_reports_every_cell() {
    let w = workdir();
    let o = bloch(&["falsify-gbp", "--space", "space.json", "--op", "refl.json", "--json"], w.path());
    let ls = lines(&o);
    let cells: Vec<&Value> = ls.iter().filter(|r| r["check_name"].as_str().is_some_and(|n| n.starts_with("falsify.lambda"))).collect();
    assert_eq!(cells.len(), 7);
    let projection: Vec<&&Value> = cells.iter().filter(|r| r["params"]["predicted_projection"] == true).collect();
    assert_eq!(projection.len(), 1);
    assert!(projection[0]["params"]["quadratic_residual"].as_f64().unwrap() <= 1e-12);
    for c in cells.iter().filter(|r| r["params"]["predicted_projection"] == false) {
        assert!(c["params"]["quadratic_residual"].as_f64().unwrap() > 1e-3);
    }
}

#[test]
fn trace_writes_csv() {
    let w = workdir();
    let o = bloch(&["trace", "--flow", "flow.json", "--z", "0.1,0.2", "--z=-0.3,0", "--t1", "30", "--steps", "4", "--out", "t.csv"], w.path());
    assert!(o.status.success());
    let text = fs::read_to_string(w.path().join("t.csv")).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().collect::<Vec<_>>(), ["t", "re_z0", "im_z0", "re_zt", "im_zt"]);
    let recs: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), 8);
    // Attracted to beta = -1.
    let last = &recs[3];
    assert!((last[3].parse::<f64>().unwrap() + 1.0).abs() < 1e-6);
}
