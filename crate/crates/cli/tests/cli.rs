use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn trop(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trop"))
        .args(args)
        .current_dir(dir)
        .env_remove("TROP_MAX_SEED_RETRIES")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn put(&self, name: &str, body: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn dir(&self) -> &Path {
        self.0.path()
    }

    fn run(&self, args: &[&str]) -> Output {
        trop(args, self.dir())
    }
}

const SIMPLEX2: &str = r#"{"dim": 2, "vertices": [[0,0],[1,0],[0,1]]}"#;
const SQUARE: &str = r#"{"dim": 2, "vertices": [[0,0],[1,0],[0,1],[1,1]]}"#;
const LINE: &str = r#"{"dim": 2, "cycle_dim": 1, "cones": [
    {"rays": [[-1,0]], "weight": 1}, {"rays": [[0,-1]], "weight": 1}, {"rays": [[1,1]], "weight": 1}]}"#;
const BAD: &str = r#"{"dim": 2, "cycle_dim": 1, "cones": [{"rays": [[1,0]], "weight": 1}, {"rays": [[0,1]], "weight": 1}]}"#;
const P2: &str = r#"{"dim": 2, "cones": [{"rays": [[1,0],[0,1]]}, {"rays": [[0,1],[-1,-1]]}, {"rays": [[-1,-1],[1,0]]}],
    "h0": [{"ray": [1,0], "value": 0}, {"ray": [0,1], "value": 0}, {"ray": [-1,-1], "value": 1}]}"#;
const P1P1: &str = r#"{"dim": 2, "cones": [{"rays": [[1,0],[0,1]]}, {"rays": [[0,1],[-1,0]]},
    {"rays": [[-1,0],[0,-1]]}, {"rays": [[0,-1],[1,0]]}],
    "h0": [{"ray": [1,0], "value": 1}, {"ray": [-1,0], "value": 0}, {"ray": [0,1], "value": 1}, {"ray": [0,-1], "value": 0}]}"#;
const QUADRANT: &str = r#"{"dim": 2, "cones": [{"rays": [[1,0],[0,1]]}]}"#;

#[test]
fn mixed_volume_of_simplices() {
    let f = Files::new();
    f.put("s.json", SIMPLEX2);
    let out = f.run(&["mixed-volume", "s.json", "s.json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["mixed_volume"], "1/2");
    assert_eq!(v["bkk"], "1");
}

#[test]
fn balance_reports_violation_with_exit_2() {
    let f = Files::new();
    f.put("bad.json", BAD);
    f.put("line.json", LINE);
    let out = f.run(&["balance", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["error"]["kind"], "unbalanced");
    assert_eq!(v["error"]["ridge"]["rays"], serde_json::json!([]));
    let ok = f.run(&["balance", "line.json"]);
    assert!(ok.status.success());
    assert_eq!(json_of(&ok)["balanced"], true);
}

#[test]
fn intersect_is_seed_independent() {
    let f = Files::new();
    f.put("a.json", LINE);
    let r7 = json_of(&f.run(&["intersect", "a.json", "a.json", "--seed", "7"]));
    let r8 = json_of(&f.run(&["intersect", "a.json", "a.json", "--seed", "8"]));
    assert_eq!(r7["value"], "1");
    assert_eq!(r7["value"], r8["value"]);
    assert_eq!(r7["seed"], 7);
    assert!(!r7["pairs"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_deterministic() {
    let f = Files::new();
    f.put("a.json", LINE);
    let x = f.run(&["intersect", "a.json", "a.json", "--seed", "3"]);
    let y = f.run(&["intersect", "a.json", "a.json", "--seed", "3"]);
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn hypersurface_round_trips_through_files() {
    let f = Files::new();
    f.put("sq.json", SQUARE);
    let out = f.run(&["hypersurface", "sq.json", "-o", "h.json"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let h = json_of(&f.run(&["balance", "h.json"]));
    assert_eq!(h["balanced"], true);
    let s = f.run(&["sum", "h.json", "h.json", "-o", "h2.json"]);
    assert!(s.status.success());
    let e = json_of(&f.run(&["equivalent", "h.json", "h2.json"]));
    assert_eq!(e["equivalent"], false);
    let e = json_of(&f.run(&["equivalent", "h.json", "h.json"]));
    assert_eq!(e["equivalent"], true);
}

#[test]
fn degree_three_way_check() {
    let f = Files::new();
    f.put("s.json", SIMPLEX2);
    f.put("sq.json", SQUARE);
    let v = json_of(&f.run(&["degree", "sq.json", "s.json", "--fan", "auto"]));
    assert_eq!(v["tropical"], "2");
    assert_eq!(v["bkk"], "2");
    assert_eq!(v["top_pairing"], "2");
    assert_eq!(v["seed"], 1);
}

#[test]
fn degree_with_a_fan_that_does_not_refine() {
    let f = Files::new();
    f.put("s.json", SIMPLEX2);
    f.put("p2.json", P2);
    let out = f.run(&["degree", "s.json", "s.json", "--fan", "p2.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "not_linear_on_cone");
}

#[test]
fn kp_ring_dimensions() {
    let f = Files::new();
    f.put("p2.json", P2);
    f.put("p1p1.json", P1P1);
    let v = json_of(&f.run(&["kp-ring", "p2.json"]));
    assert_eq!(v["dims"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["smooth_fan"], true);
    let v = json_of(&f.run(&["kp-ring", "p1p1.json"]));
    assert_eq!(v["dims"], serde_json::json!([1, 2, 1]));
    assert_eq!(v["pairing"]["1"].as_array().unwrap().len(), 2);
}

#[test]
fn top_pairing_of_unit_square_classes() {
    let f = Files::new();
    f.put("p1p1.json", P1P1);
    f.put("sq.json", SQUARE);
    let v = json_of(&f.run(&["top-pairing", "p1p1.json", "sq.json", "sq.json"]));
    assert_eq!(v["top_pairing"], "2");
}

#[test]
fn covers_predicate() {
    let f = Files::new();
    f.put("q.json", QUADRANT);
    f.put("p2.json", P2);
    f.put("line.json", LINE);
    assert_eq!(json_of(&f.run(&["covers", "q.json", "line.json"]))["covers"], false);
    assert_eq!(json_of(&f.run(&["covers", "p2.json", "line.json"]))["covers"], true);
}

#[test]
fn parse_and_io_errors_exit_1() {
    let f = Files::new();
    f.put("broken.json", "{ not json");
    let out = f.run(&["mixed-volume", "broken.json", "broken.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"]["kind"], "input");
    let out = f.run(&["hypersurface", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn failures_leave_no_output_file() {
    let f = Files::new();
    f.put("bad.json", BAD);
    f.put("line.json", LINE);
    let out = f.run(&["sum", "bad.json", "line.json", "-o", "out.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!f.dir().join("out.json").exists());
}

#[test]
fn domain_errors_exit_2() {
    let f = Files::new();
    f.put("s.json", SIMPLEX2);
    f.put("seg.json", r#"{"dim": 2, "vertices": [[0,0],[3,0]]}"#);
    let out = f.run(&["hypersurface", "seg.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "not_full_dimensional");
    let out = f.run(&["mixed-volume", "s.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format() {
    let f = Files::new();
    f.put("s.json", SIMPLEX2);
    let out = f.run(&["mixed-volume", "s.json", "s.json", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("mixed_volume: 1/2"));
    assert!(text.contains("bkk: 1"));
}

#[test]
fn seed_retry_budget_from_environment() {
    let f = Files::new();
    f.put("a.json", LINE);
    let out = Command::new(env!("CARGO_BIN_EXE_trop"))
        .args(["intersect", "a.json", "a.json"])
        .current_dir(f.dir())
        .env("TROP_MAX_SEED_RETRIES", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json_of(&out)["seed"], 1);
}

#[test]
fn stable_product_through_intersect() {
    let f = Files::new();
    f.put("d3.json", r#"{"dim": 3, "vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}"#);
    assert!(f.run(&["hypersurface", "d3.json", "-o", "plane.json"]).status.success());
    let v = json_of(&f.run(&["intersect", "plane.json", "plane.json"]));
    let cones = v["product"]["cones"].as_array().unwrap();
    assert_eq!(v["product"]["cycle_dim"], 1);
    assert!(cones.iter().all(|c| c["weight"] == "1"));
    assert_eq!(cones.len(), 4);
}
