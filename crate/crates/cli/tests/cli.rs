use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const PARABOLA: &str = r#"{"n":1,"r":0,"components":[[{"coeff":"1","y":[1]},{"coeff":"-1","x":[2]}]]}"#;
const Y_MINUS_ONE: &str = r#"{"n":1,"r":0,"components":[[{"coeff":"1","y":[1]},{"coeff":"-1"}]]}"#;
const ROOT_NEAR_ONE: f64 = 0.962_388_608_184_031_2;

struct Run {
    code: i32,
    report: Value,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_liouville"))
        .arg("--quiet")
        .args(args)
        .output()
        .expect("spawn");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        report: serde_json::from_str(&stdout).unwrap_or(Value::Null),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn bounds_prints_both_degrees() {
    let r = run(&["bounds", "--n", "2", "--r", "1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["result"]["inductive"], "12");
    assert_eq!(r.report["result"]["finiteness"], "5");
    assert_eq!(r.report["command"], "bounds");
}

#[test]
fn eval_examples() {
    let r = run(&["eval", "--d", "1", "--x", "2"]);
    assert_eq!(r.report["result"]["value"]["re"], "1");
    let r = run(&["eval", "--d", "3", "--x", "1"]);
    assert_eq!(r.report["result"]["value"]["re"], "1.0625");
    assert_eq!(r.report["result"]["exact"]["value"]["re"], "17/16");
    let r = run(&["eval", "--d", "2", "--eps", "0.0625", "--x", "1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["result"]["value"]["re"], "1.0625");
    assert_eq!(r.report["result"]["exact"]["value"]["re"], "17/16");
}

#[test]
fn eval_rejects_bad_number() {
    let r = run(&["eval", "--d", "2", "--x", "abc"]);
    assert_eq!(r.code, 4);
    assert_eq!(r.report["outcome"]["status"], "input_error");
}

#[test]
fn audit_default_tower() {
    let r = run(&["seq", "audit", "--l", "3", "--max-i", "7"]);
    assert_eq!(r.code, 0);
    let a = &r.report["result"]["audits"][0];
    assert_eq!(a["least_all_true_index"], 4);
    assert_eq!(a["first_failing_index"], 1);
    assert_eq!(a["admissible"], true);
    assert_eq!(a["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn audit_factorial_pow2_is_not_admissible() {
    let r = run(&["seq", "audit", "--sequence", "factorial_pow2", "--l", "2", "--max-i", "6"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["result"]["audits"][0]["admissible"], false);
}

#[test]
fn audit_single_row() {
    let r = run(&["seq", "audit", "--l", "1", "--max-i", "1"]);
    let rows = r.report["result"]["audits"][0]["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["holds"], false);
}

#[test]
fn certify_parabola_is_well_balanced() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "sys.json", PARABOLA);
    let pt = write(dir.path(), "pt.json", r#"{"x":["2"],"y":["4"]}"#);
    let r = run(&["certify", "--system", s(&sys), "--point", s(&pt)]);
    assert_eq!(r.code, 0);
    let res = &r.report["result"];
    assert_eq!(res["flags"]["well_balanced"], true);
    assert_eq!(res["witness"]["I"], serde_json::json!([1]));
    assert_eq!(res["witness"]["J"], serde_json::json!([]));
    assert_eq!(r.report["inputs"].as_object().unwrap().len(), 2);
}

#[test]
fn certify_constant_coordinate_is_not_well_balanced() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "sys.json", r#"{"n":1,"r":0,"components":[[{"coeff":"1","x":[1]},{"coeff":"-3"}]]}"#);
    let pt = write(dir.path(), "pt.json", r#"{"x":["3"],"y":["1"]}"#);
    let r = run(&["certify", "--system", s(&sys), "--point", s(&pt)]);
    assert_eq!(r.code, 2);
    let flags = &r.report["result"]["flags"];
    assert_eq!(flags["regular"], true);
    assert_eq!(flags["balanced"], true);
    assert_eq!(flags["well_balanced"], false);
}

#[test]
fn certify_non_zero_point() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "sys.json", PARABOLA);
    let pt = write(dir.path(), "pt.json", r#"{"x":["2"],"y":["4.1"]}"#);
    let r = run(&["certify", "--system", s(&sys), "--point", s(&pt)]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["outcome"]["error_kind"], "NotAZero");
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "sys.json", r#"{"n":1,"#);
    let pt = write(dir.path(), "pt.json", r#"{"x":["2"],"y":["4"]}"#);
    let r = run(&["certify", "--system", s(&sys), "--point", s(&pt)]);
    assert_eq!(r.code, 4);
    let r = run(&["solve", "--system", s(&sys)]);
    assert_eq!(r.code, 4);
    let unknown = write(dir.path(), "u.json", r#"{"n":1,"r":0,"components":[],"extra":1}"#);
    assert_eq!(run(&["solve", "--system", s(&unknown)]).code, 4);
}

#[test]
fn missing_file_and_bad_flags_are_input_errors() {
    assert_eq!(run(&["certify", "--system", "/nonexistent.json", "--point", "/nonexistent.json"]).code, 4);
    assert_eq!(run(&["bounds", "--n", "two", "--r", "1"]).code, 4);
}

#[test]
fn solve_y_equals_one_with_trace() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "sys.json", Y_MINUS_ONE);
    let trace = dir.path().join("trace.csv");
    let r = run(&["solve", "--system", s(&sys), "--trace", s(&trace)]);
    assert_eq!(r.code, 0);
    let lr = &r.report["result"]["limit_root"];
    assert_eq!(lr["certified"], true);
    assert!((num(&lr["a"][0]["re"]) - ROOT_NEAR_ONE).abs() < 1e-15);
    assert!(lr["total_residual_bound_log2"].as_i64().unwrap() <= -100);
    let text = std::fs::read_to_string(&trace).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d,eps_log2,x1_re,x1_im,residual_log2,newton_iters");
    assert_eq!(lines.len() - 1, lr["accepted_states"].as_u64().unwrap() as usize);
    assert_eq!(r.report["artifacts"][0], s(&trace));
}

#[test]
fn solve_without_start_root_fails_with_exit_3() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "sys.json", r#"{"n":1,"r":0,"components":[[{"coeff":"1","y":[1]},{"coeff":"-100"}]]}"#);
    let r = run(&["solve", "--system", s(&sys), "--r-max", "1", "--budget", "3", "--d-max", "3"]);
    assert_eq!(r.code, 3);
    assert_eq!(r.report["outcome"]["error_kind"], "StartNotFound");
}

#[test]
fn track_from_explicit_start() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "sys.json", Y_MINUS_ONE);
    let start = write(dir.path(), "start.json", r#"{"x":["2"]}"#);
    let r = run(&["track", "--system", s(&sys), "--start", s(&start), "--d", "1"]);
    assert_eq!(r.code, 0);
    let lr = &r.report["result"]["limit_root"];
    assert_eq!(lr["start_d"], 1);
    assert!((num(&lr["a"][0]["re"]) - ROOT_NEAR_ONE).abs() < 1e-15);
}

#[test]
fn result_document_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "sys.json", Y_MINUS_ONE);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        assert_eq!(run(&["--seed", "7", "--out", s(out), "solve", "--system", s(&sys)]).code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn limit_root_recertifies() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "sys.json", Y_MINUS_ONE);
    let r = run(&["solve", "--system", s(&sys)]);
    let lr = &r.report["result"]["limit_root"];
    let a = lr["a"][0]["re"].as_str().unwrap().to_string();
    let d = lr["final_d"].to_string();
    let h = run(&["eval", "--d", &d, "--x", &a]);
    let y = h.report["result"]["value"]["re"].as_str().unwrap().to_string();
    let pt = write(dir.path(), "pt.json", &format!(r#"{{"x":["{a}"],"y":["{y}"]}}"#));
    let c = run(&["certify", "--system", s(&sys), "--point", s(&pt)]);
    assert_eq!(c.code, 0);
    assert_eq!(c.report["result"]["flags"]["well_balanced"], true);
}
