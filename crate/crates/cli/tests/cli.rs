use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wmpinv"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("WMP_GCD_BUDGET").output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen_problem(dir: &TempDir, name: &str, seed: u64) -> PathBuf {
    let out = dir.path().join(name);
    let seed = seed.to_string();
    let r = run(&[
        "gen", "--output", path_str(&out), "--m", "3", "--n", "2", "--d", "1", "--sp1", "0.8", "--sp2", "0.5", "--seed", &seed,
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    out
}

fn scalar_problem(m_term: &str) -> String {
    let one = r#"{"mode":"complex","p":1,"rows":1,"cols":1,"entries":[{"i":0,"j":0,"terms":[{"exp":[0,0],"re":"1"}]}]}"#;
    let a = r#"{"mode":"complex","p":1,"rows":1,"cols":1,"entries":[{"i":0,"j":0,"terms":[{"exp":[1,0],"re":"2"},{"exp":[0,0],"re":"1"}]}]}"#;
    let m = format!(r#"{{"mode":"complex","p":1,"rows":1,"cols":1,"entries":[{{"i":0,"j":0,"terms":[{m_term}]}}]}}"#);
    format!(r#"{{"mode":"complex","p":1,"A":{a},"M":{m},"N":{one}}}"#)
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let a = std::fs::read(gen_problem(&dir, "a.json", 7)).unwrap();
    let b = std::fs::read(gen_problem(&dir, "b.json", 7)).unwrap();
    let c = std::fs::read(gen_problem(&dir, "c.json", 8)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn wpinv_result_verifies_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let problem = gen_problem(&dir, "p.json", 3);
    let result = dir.path().join("r.json");
    for alg in ["rational", "poly-dense", "eff", "eff-prime", "ef"] {
        let r = run(&["wpinv", "--input", path_str(&problem), "--output", path_str(&result), "--algorithm", alg, "--verify"]);
        assert_eq!(code(&r), 0, "{alg}: {}", String::from_utf8_lossy(&r.stderr));
        let v = json(&result);
        assert_eq!(v["verified"], Value::Bool(true));
        assert_eq!(v["algorithm"], Value::String(alg.into()));
        assert!(v["X"].is_object());
    }
    let report = dir.path().join("v.json");
    let r = run(&[
        "verify", "--input", path_str(&problem), "--candidate", path_str(&result), "--output", path_str(&report), "--points", "3",
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let v = json(&report);
    for eq in ["eq1", "eq2", "eq3", "eq4"] {
        assert_eq!(v[eq], Value::Bool(true));
    }
    let points = v["oracle_points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    for p in points {
        assert!(p["max_rel_err"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn omit_x_drops_the_quotient() {
    let dir = TempDir::new().unwrap();
    let problem = gen_problem(&dir, "p.json", 5);
    let result = dir.path().join("r.json");
    let r = run(&["wpinv", "--input", path_str(&problem), "--output", path_str(&result), "--omit-x"]);
    assert_eq!(code(&r), 0);
    let v = json(&result);
    assert!(v.get("X").is_none());
    assert_eq!(v["verified"], Value::Bool(false));
}

#[test]
fn printed_example_result_fails_verification() {
    let r = run(&[
        "verify",
        "--input",
        path_str(&data("example.json")),
        "--candidate",
        path_str(&data("example_printed_x.json")),
        "--points",
        "0",
    ]);
    assert_eq!(code(&r), 4);
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    for eq in ["eq1", "eq2", "eq3", "eq4"] {
        assert_eq!(v[eq], Value::Bool(false));
    }
}

#[test]
fn sparsity_of_example() {
    let r = run(&["sparsity", "--input", path_str(&data("example.json"))]);
    assert_eq!(code(&r), 0);
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.contains("sp1=9/9 (1)"), "{text}");
    assert!(text.contains("sp2=26/36 (13/18)"), "{text}");
}

#[test]
fn ninv_reports_every_level() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("n.json");
    let r = run(&["ninv", "--input", path_str(&data("example.json")), "--output", path_str(&out)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let v = json(&out);
    let steps = v["steps"].as_array().expect("steps array");
    assert_eq!(steps.len(), 3);
    assert_eq!(steps[0]["k"], 1);
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"mode\": \"complex\"").unwrap();
    assert_eq!(code(&run(&["wpinv", "--input", path_str(&bad)])), 2);

    let shape = dir.path().join("shape.json");
    let text = scalar_problem(r#"{"exp":[0,0],"re":"1"}"#).replacen(r#""rows":1"#, r#""rows":2"#, 1);
    std::fs::write(&shape, text).unwrap();
    assert_eq!(code(&run(&["wpinv", "--input", path_str(&shape)])), 2);
}

#[test]
fn infeasible_generator_spec_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.json");
    let r = run(&["gen", "--output", path_str(&out), "--m", "2", "--n", "2", "--d", "1", "--sp1", "1", "--sp2", "0.05"]);
    assert_eq!(code(&r), 2);
}

#[test]
fn non_hermitian_weight_exits_3() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("p.json");
    std::fs::write(&p, scalar_problem(r#"{"exp":[1,0],"re":"1"}"#)).unwrap();
    let r = run(&["wpinv", "--input", path_str(&p)]);
    assert_eq!(code(&r), 3, "{}", String::from_utf8_lossy(&r.stderr));
}

#[test]
fn scalar_problem_gives_reciprocal() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("p.json");
    std::fs::write(&p, scalar_problem(r#"{"exp":[0,0],"re":"3"}"#)).unwrap();
    let out = dir.path().join("r.json");
    let r = run(&["wpinv", "--input", path_str(&p), "--output", path_str(&out), "--verify"]);
    assert_eq!(code(&r), 0);
    let v = json(&out);
    let y = v["Y"].as_array().unwrap();
    let z = v["Z"]["entries"].as_array().unwrap();
    assert_eq!(y.len(), 2);
    assert_eq!(z.len(), 1);
    assert_eq!(z[0]["terms"].as_array().unwrap().len(), 1);
}

#[test]
fn bench_writes_csv_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("b.csv");
    let r = run(&[
        "bench", "--output", path_str(&out), "--grid", "2x2x1", "--sp1", "1,0.5", "--sp2", "0.75,0.5", "--algorithm", "ef,eff", "--trials", "2",
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m,n,d,sp1,sp2,algorithm,mean_seconds,trials,errors");
    assert_eq!(lines.len(), 5);
    let side = json(&dir.path().join("b.csv.json"));
    assert_eq!(side["trials"], 2);
    assert_eq!(side["master_seed"], 1);
}

#[test]
fn budget_still_gives_a_valid_inverse() {
    let dir = TempDir::new().unwrap();
    let problem = gen_problem(&dir, "p.json", 11);
    let out = dir.path().join("r.json");
    let r = bin()
        .args(["wpinv", "--input", path_str(&problem), "--output", path_str(&out), "--verify"])
        .env("WMP_GCD_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(json(&out)["verified"], Value::Bool(true));
}
