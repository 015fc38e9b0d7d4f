use std::io::Write;
use std::process::{Command, Stdio};

use kgraph_std::cli::run;
use serde_json::Value;

fn kgraph(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["kgraph"];
    argv.extend_from_slice(args);
    let out = run(argv);
    (out.code, out.stdout, out.stderr)
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["--json"];
    argv.extend_from_slice(args);
    let (code, out, err) = kgraph(&argv);
    assert!(err.is_empty() || code == 2, "{err}");
    (code, serde_json::from_str(&out).unwrap_or(Value::Null))
}

#[test]
fn library_piped_into_validate() {
    let exe = env!("CARGO_BIN_EXE_kgraph");
    let lib = Command::new(exe).args(["library", "one_vertex_fefe"]).output().unwrap();
    assert!(lib.status.success());
    let mut child = Command::new(exe).arg("validate").stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(&lib.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
}

#[test]
fn compare_markov_against_pf() {
    let (code, v) = json(&["compare", "--mu", "markov_x0.3", "--nu", "pf", "--depth", "40"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "singular");
    let ratio = v["ratios"].as_array().unwrap().last().unwrap().as_f64().unwrap();
    let want = (0.3f64.sqrt() + 0.7f64.sqrt()) / 2f64.sqrt();
    assert!((ratio - want).abs() < 1e-6);
    let (code, _, _) = kgraph(&["compare", "--mu", "markov_x0.3", "--nu", "pf", "--expect", "equivalent"]);
    assert_eq!(code, 1);
    let (code, _, _) = kgraph(&["compare", "--mu", "markov_x0.5", "--nu", "pf", "--expect", "equivalent"]);
    assert_eq!(code, 0);
    let (code, _, _) = kgraph(&["compare", "--mu", "pf", "--nu", "pf", "--expect", "maybe"]);
    assert_eq!(code, 2);
}

#[test]
fn exact_ck_on_one_vertex_graph() {
    let (code, v) = json(&["ck-l2", "--spec", "pf", "--level", "2", "--bound", "2,2", "--exact"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["maxDefect"], 0.0);
    assert_eq!(v["report"]["exact"], true);
    let (code, _, err) = kgraph(&["ck-l2", "--spec", "kakutani", "--exact"]);
    assert_eq!(code, 2);
    assert!(err.contains("exact"));
}

#[test]
fn broken_graph_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    // f1 e has no square
    let g = r#"{"k": 2, "vertices": ["v"],
        "edges": [{"id": "f1", "color": 1, "source": "v", "range": "v"},
                  {"id": "f2", "color": 1, "source": "v", "range": "v"},
                  {"id": "e", "color": 2, "source": "v", "range": "v"}],
        "squares": [{"lhs": ["f2", "e"], "rhs": ["e", "f1"]}]}"#;
    std::fs::write(&path, g).unwrap();
    let (code, v) = json(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    // commands that need a valid graph treat it as bad input
    let (code, _, _) = kgraph(&["info", path.to_str().unwrap()]);
    assert_eq!(code, 2);

    std::fs::write(&path, "{\"k\": 2,").unwrap();
    let (code, _, err) = kgraph(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["--json", "ck-inductive", "-g", "three_vertex_eight_edge", "--bounds", "1,2"];
    let a = kgraph(&args);
    let b = kgraph(&args);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let args = ["--json", "sbfs-check", "one_vertex_fefe"];
    assert_eq!(kgraph(&args).1, kgraph(&args).1);
}

#[test]
fn library_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("star.json");
    let g = g.to_str().unwrap();
    let (code, _, err) = kgraph(&["library", "lambda_2N", "--N", "2", "--perm", "3,4,1,2", "-o", g]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(kgraph(&["validate", g]).0, 0);
    let (code, v) = json(&["info", g]);
    assert_eq!(code, 0);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
    assert_eq!(kgraph(&["consistency", "-g", g, "--spec", "lambda2n_x0.4", "--depth", "3"]).0, 0);

    assert_eq!(kgraph(&["library", "lambda_2N", "--N", "1", "--perm", "1,1"]).0, 2);
    assert_eq!(kgraph(&["library", "one_vertex_fefe", "--N", "2"]).0, 2);
    assert_eq!(kgraph(&["library", "no_such_graph"]).0, 2);
}

#[test]
fn system_files_round_trip_and_fail_when_broken() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.json");
    let p = path.to_str().unwrap();
    assert_eq!(kgraph(&["library", "three_vertex_eight_edge", "--system", "-o", p]).0, 0);
    let (code, v) = json(&["sbfs-check", p]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["checks"].as_array().unwrap().len(), 8);

    // declare the wrong range for a0
    let mut sys: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    sys["ranges"]["a0"] = serde_json::json!({"intervals": [[0, "1/6"]]});
    std::fs::write(&path, sys.to_string()).unwrap();
    let (code, v) = json(&["sbfs-check", p]);
    assert_eq!(code, 1);
    let checks = v["report"]["checks"].as_array().unwrap();
    let ranges = checks.iter().find(|c| c["name"] == "ranges").unwrap();
    assert_eq!(ranges["passed"], false);

    sys["maps"]["a0"] = serde_json::json!([{"domain": {"intervals": [[0, 1]]}, "fx": {"x^2": 1}}]);
    std::fs::write(&path, sys.to_string()).unwrap();
    assert_eq!(kgraph(&["sbfs-check", p]).0, 2);
}

#[test]
fn product_of_line_systems() {
    let (code, v) = json(&["sbfs-check", "two_loops", "--times", "three_vertex_eight_edge"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 2);
    assert_eq!(kgraph(&["sbfs-check", "one_vertex_fefe", "--times", "two_loops"]).0, 2);
}

#[test]
fn measures_and_rn_values() {
    let (code, v) = json(&["measure", "one_vertex_fefe", "--spec", "markov_x0.3", "--cylinder", "e,f1,e,f2"]);
    assert_eq!(code, 0);
    assert_eq!(v["exact"], "7/20");
    let (_, v) = json(&["measure", "one_vertex_fefe", "--cylinder", "@v"]);
    assert_eq!(v["exact"], "1");
    let (code, v) = json(&["rn", "--spec", "markov_x0.3", "--edge", "f1", "--point", "e,f2"]);
    assert_eq!(code, 0);
    assert_eq!(v["exact"], "7/10");
    assert_eq!(v["stabilizedAt"], 1);
    let (_, v) = json(&["rn", "--spec", "markov_x0.3", "--edge", "e", "--point", "e,f2"]);
    assert_eq!(v["exact"], "1");
    assert_eq!(kgraph(&["rn", "--edge", "nope"]).0, 2);
}

#[test]
fn inductive_commands() {
    let (code, v) = json(&["gauge", "--bounds", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["reports"].as_array().unwrap().len(), 8);
    assert_eq!(kgraph(&["gauge", "--z", "0,1;0.6,0.8"]).0, 0);
    assert_eq!(kgraph(&["gauge", "--z", "0,2;1,0"]).0, 2);
    assert_eq!(kgraph(&["gauge", "--z", "0,1"]).0, 2);

    let args = ["intertwine", "-g", "three_vertex_eight_edge", "--x", "default:v", "--y", "default:v", "--m", "0", "--n", "0"];
    assert_eq!(kgraph(&args).0, 0);
    let (code, _, err) = kgraph(&["intertwine", "--x", "e,f1", "--y", "e,f2", "--m", "0", "--n", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("tails"));
    assert_eq!(kgraph(&["direct-sum", "--bound", "1"]).0, 0);
    assert_eq!(kgraph(&["direct-sum", "--point", "e,f1", "--point", "e,f2"]).0, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(kgraph(&["measure", "one_vertex_fefe"]).0, 2);
    assert_eq!(kgraph(&["frobnicate"]).0, 2);
    assert_eq!(kgraph(&["ck-inductive", "--bounds", "2"]).0, 2);
    assert_eq!(kgraph(&["consistency", "--spec", "markov_x2"]).0, 2);
    let (code, out, _) = kgraph(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("sbfs-check"));
}
