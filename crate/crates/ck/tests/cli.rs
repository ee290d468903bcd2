use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ck")).args(args).env("CK_THREADS", "2").output().expect("run ck")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_passes_with_exit_zero() {
    let out = ck(&["verify", "--algebra", "csv", "--window", "-1..1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("ck verify --algebra csv --window -1..1"), "{}", text);
    assert!(text.lines().last().unwrap().starts_with("PASS"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--window", "3..1"][..],
        &["verify", "--window", "x"],
        &["verify", "--algebra", "no-such-algebra"],
        &["modules", "--family", "pattern"],
        &["frobnicate"],
    ] {
        let out = ck(args);
        assert_eq!(out.status.code(), Some(2), "{:?}", args);
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn failing_checks_exit_one() {
    let out = ck(&["modules", "--algebra", "csv-ext", "--family", "all-patterns", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    let checks = v["result"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 32);
    assert_eq!(checks.iter().filter(|c| c["failed"] == 0).count(), 2);
}

#[test]
fn json_report_shape() {
    let out = ck(&["cohomology", "--algebra", "csv", "--window", "-1..1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "cohomology");
    assert_eq!(v["config"]["window"], "-1..1");
    assert_eq!(v["config"]["deg_bound"], 5);
    let sums = v["result"]["sums"].as_array().unwrap();
    assert_eq!(sums.len(), 3);
    assert!(sums.iter().all(|s| s["dim"] == 1 && s["representatives_checked"] == true));
}

#[test]
fn out_writes_the_report_to_a_file() {
    let path = std::env::temp_dir().join(format!("ck-cli-out-{}.json", std::process::id()));
    let out = ck(&["verify", "--algebra", "cv", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn algebra_from_a_json_file() {
    let good = r#"{"families":["L"],"brackets":[{"left":"L","right":"L","out":[{"family":"L","poly":"d+2*l"}]}]}"#;
    let bad = good.replace("d+2*l", "d+3*l");
    let out = ck(&["verify", "--algebra", scratch("good.json", good).to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = ck(&["verify", "--algebra", scratch("bad.json", &bad).to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["config"]["algebra"].as_str().unwrap().ends_with("bad.json"));
    let broken = scratch("broken.json", r#"{"families":["L"],"brackets":[{"left":"L","right":"L","out":[{"family":"L","poly":"d+"}]}]}"#);
    let out = ck(&["verify", "--algebra", broken.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("brackets[0].out[0].poly"));
}

#[test]
fn ope_file_for_the_virasoro_commutator() {
    // [L_i(z), L_j(w)] = ∂_w L(w) δ + 2 L(w) ∂_w δ
    let good = r#"{"families":["L"],"commutators":[{"left":"L","right":"L","terms":[
        {"j":0,"family":"L","poly":"d"},{"j":1,"family":"L","poly":"2"}]}]}"#;
    let out = ck(&["ope", "--algebra", "cv", "--file", scratch("vir.json", good).to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let bad = good.replace(r#""poly":"2""#, r#""poly":"3""#);
    let out = ck(&["ope", "--algebra", "cv", "--file", scratch("vir3.json", &bad).to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!json(&out)["result"]["differences"].as_array().unwrap().is_empty());
}

#[test]
fn module_rules_from_a_file() {
    let good = r#"{"units":["c"],"rules":[{"family":"L","poly":"c^i*(d+a*l+b)"}]}"#;
    let out = ck(&["modules", "--algebra", "cv", "--rules", scratch("rank1.json", good).to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let bad = r#"{"rules":[{"family":"L","poly":"d+l^2"}]}"#;
    let out = ck(&["modules", "--algebra", "cv", "--rules", scratch("sq.json", bad).to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rank_one_solver_over_csv_ext() {
    let out = ck(&["modules", "--algebra", "csv-ext", "--family", "rank-one", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let cl = &json(&out)["result"]["classification"];
    assert_eq!(cl["settled"], true);
    assert_eq!(cl["round_trip"], true);
    assert_eq!(cl["forced"]["e"], "0");
    assert_eq!(cl["forced"]["N"], "dn*c^i");
}
