use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_centroflow"));
    cmd.args(args).env_remove("CENTROFLOW_TOLERANCE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_doc(dir: &Path, name: &str, dimension: usize, vertices: &[&[f64]]) -> PathBuf {
    let path = dir.join(name);
    let doc = serde_json::json!({ "dimension": dimension, "closed": true, "vertices": vertices });
    fs::write(&path, doc.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn pentagon(dir: &Path) -> PathBuf {
    write_doc(dir, "pentagon.json", 3, &[&[10.0, 22.0, 1.0], &[8.0, 2.0, 1.0], &[21.0, 0.0, 1.0], &[37.0, 2.0, 1.0], &[48.0, 28.0, 1.0]])
}

#[test]
fn invariants_table_and_csv() {
    let dir = TempDir::new().unwrap();
    let file = pentagon(dir.path());
    let out = run(&["invariants", s(&file)]);
    assert!(out.status.success());
    let text = stdout(&out);
    for value in ["0.3529", "0.2197", "6.7931", "2.3401", "0.8113", "0.2059", "-0.0508"] {
        assert!(text.contains(value), "missing {value} in\n{text}");
    }
    let csv = dir.path().join("sig.csv");
    assert!(run(&["invariants", s(&file), "--csv", s(&csv)]).status.success());
    let body = fs::read_to_string(&csv).unwrap();
    assert!(body.starts_with("vertex,kappa,kappa_bar,tau\n0,0.35294117647058826,"));
}

#[test]
fn square_has_zero_second_curvature_column() {
    let dir = TempDir::new().unwrap();
    let file = write_doc(dir.path(), "square.json", 2, &[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
    let out = run(&["invariants", s(&file), "--csv", "-"]);
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let (kappa, kappa_bar): (f64, f64) = (cols[1].parse().unwrap(), cols[2].parse().unwrap());
        assert_eq!((kappa, kappa_bar), (1.0, 0.0), "{line}");
    }
}

#[test]
fn degenerate_and_malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let flat = write_doc(dir.path(), "flat.json", 2, &[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0], &[1.0, 1.0]]);
    let out = run(&["invariants", s(&flat)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("denominator determinant vanishes at vertex"), "{}", stderr(&out));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"dimension":2,"closed":true,"vertices":[[0,0],[1e999,0],[0,1]]}"#).unwrap();
    assert_eq!(run(&["invariants", s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn generate_regular_reads_back() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("hept.json");
    assert!(run(&["generate", "--kind", "regular", "--p", "7", "--l", "1", "--out", s(&file)]).status.success());
    let text = stdout(&run(&["invariants", s(&file)]));
    assert_eq!(text.matches("1.2470").count(), 7, "{text}");

    let star = stdout(&run(&["generate", "--p", "5", "--l", "2"]));
    let doc: Value = serde_json::from_str(&star).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 5);

    assert_eq!(run(&["generate", "--p", "6", "--l", "2"]).status.code(), Some(2));
    assert!(run(&["generate", "--kind", "constant-space", "--p", "8", "--l", "3"]).status.success());
    assert_eq!(run(&["generate", "--kind", "constant-space", "--p", "7"]).status.code(), Some(2));
}

#[test]
fn match_exit_codes() {
    let dir = TempDir::new().unwrap();
    let p = write_doc(dir.path(), "p.json", 2, &[&[0.0, 0.0], &[3.0, 0.0], &[4.0, 2.0], &[1.0, 4.0], &[-1.0, 2.0]]);
    // (x, y) -> (2x + y + 1, x - y + 3), relabelled by two, first vertex nudged by 1e-10
    let q = write_doc(dir.path(), "q.json", 2, &[&[11.0000000001, 5.0], &[7.0, 0.0], &[1.0, 0.0], &[1.0, 3.0], &[7.0, 6.0]]);
    let out = run(&["match", s(&p), s(&q), "--mode", "affine2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["matched"], true);
    assert_eq!(report["shift"], 2);
    let a = &report["transform"]["linear"];
    assert!((a[0][0].as_f64().unwrap() - 2.0).abs() < 1e-9 && (a[1][1].as_f64().unwrap() + 1.0).abs() < 1e-9);

    let other = write_doc(dir.path(), "o.json", 2, &[&[0.0, 0.0], &[2.0, 0.0], &[3.0, 3.0], &[1.0, 2.5], &[-1.0, 1.0]]);
    assert_eq!(run(&["match", s(&p), s(&other), "--mode", "affine2"]).status.code(), Some(1));

    let square = write_doc(dir.path(), "sq.json", 2, &[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
    assert_eq!(run(&["match", s(&p), s(&square), "--mode", "affine2"]).status.code(), Some(2));
    assert_eq!(run(&["match", s(&p), s(&q), "--mode", "centroaffine3"]).status.code(), Some(2));

    let strict = run_env(&["match", s(&p), s(&q), "--mode", "affine2"], &[("CENTROFLOW_TOLERANCE", "1e-13")]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn flow_writes_deterministic_outputs() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = run(&["flow", "--kind", "endpoint", "--param", "c=0.2", "--gens", "12", "--seed", "5", "--out", s(out), "--svg"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for g in 0..=12 {
        let name = format!("gen_{g:04}.csv");
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap());
    }
    assert!(fs::read_to_string(a.join("gen_0012.svg")).unwrap().starts_with("<svg"));
    let summary: Value = serde_json::from_str(&fs::read_to_string(a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["stop_reason"], "no-convergence");
    assert_eq!(summary["generations"], 12);
}

#[test]
fn flow_on_regular_pentagon_is_stable_immediately() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("pent.json");
    assert!(run(&["generate", "--p", "5", "--out", s(&file)]).status.success());
    let out = run(&["flow", "--kind", "pentagram", "--input", s(&file), "--gens", "5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let summary: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["stable"], true);
    assert_eq!(summary["first_stable_generation"], 0);
}

#[test]
fn flow_reaches_heptagon_limit() {
    let dir = TempDir::new().unwrap();
    let file = write_doc(
        dir.path(),
        "hept.json",
        2,
        &[&[19.0, 14.0], &[14.0, 1.0], &[15.0, 6.0], &[15.0, 1.0], &[8.0, 2.0], &[13.0, 16.0], &[3.0, 14.0]],
    );
    let out = run(&["flow", "--kind", "proportional", "--param", "alpha=0.8", "--input", s(&file), "--gens", "80", "--no-stop"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let summary: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for e in summary["final_signature"]["entries"].as_array().unwrap() {
        assert!((e["kappa"].as_f64().unwrap() - 1.0).abs() < 1e-3);
        assert!((e["kappa_bar"].as_f64().unwrap() - 1.24698).abs() < 1e-3);
    }
}

#[test]
fn flow_config_file_and_validation() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"flow":"proportional","params":{"alpha":0.5},"max_generations":3,"seed":9,"dimension":2}"#).unwrap();
    let out = run(&["flow", "--config", s(&cfg)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let summary: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((summary["generations"].as_u64(), summary["dimension"].as_u64()), (Some(3), Some(2)));

    assert_eq!(run(&["flow", "--kind", "proportional", "--param", "alpha=1.5"]).status.code(), Some(2));
    assert_eq!(run(&["flow", "--kind", "proportional", "--param", "c=0.5"]).status.code(), Some(2));
    assert_eq!(run(&["flow", "--kind", "warp"]).status.code(), Some(2));
    assert_eq!(run(&["flow"]).status.code(), Some(2));
}

#[test]
fn reproduce_reports_pass() {
    let out = run(&["reproduce", "--table", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("table 4: PASS"));
    assert_eq!(run(&["reproduce", "--table", "9"]).status.code(), Some(2));
}

#[test]
fn check_reports_star_crossing() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("star.json");
    assert!(run(&["generate", "--p", "5", "--l", "2", "--out", s(&file)]).status.success());
    let report: Value = serde_json::from_str(&stdout(&run(&["check", s(&file)]))).unwrap();
    assert_eq!(report["closure"]["is_closed"], true);
    assert_eq!(report["convexity"]["is_simple"], false);
    assert_eq!(report["constant"]["closure"]["kind"], "PlanarStar");

    let space = dir.path().join("space.json");
    assert!(run(&["generate", "--kind", "constant-space", "--p", "6", "--out", s(&space)]).status.success());
    let report: Value = serde_json::from_str(&stdout(&run(&["check", s(&space)]))).unwrap();
    assert_eq!(report["planar"], false);
    assert_eq!(report["closure"]["centrosymmetric"], true);
}
