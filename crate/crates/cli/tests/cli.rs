use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn kcausal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcausal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// Samples `model` on a grid (or `n` random events) and computes relations.
fn dataset(dir: &TempDir, model: &str, sampling: &[&str]) -> PathBuf {
    let raw = path(dir, "raw.json");
    let full = path(dir, "full.json");
    let mut args = vec!["sample", "--model", model, "--out", s(&raw)];
    args.extend_from_slice(sampling);
    let out = kcausal(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = kcausal(&["relations", "--in", s(&raw), "--out", s(&full)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    full
}

fn reports(out: &Output) -> Vec<Value> {
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    doc["reports"].as_array().unwrap().clone()
}

#[test]
fn sample_is_deterministic_and_records_the_seed() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
    for p in [&a, &b] {
        let out = kcausal(&["sample", "--model", "minkowski", "--grid", "10x10", "--out", s(p)]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(read_json(&a)["events"].as_array().unwrap().len(), 100);

    let c = path(&dir, "c.json");
    let out = kcausal(&["sample", "--model", "cylinder:period=1", "--n", "50", "--seed", "7", "--out", s(&c)]);
    assert_eq!(code(&out), 0);
    let doc = read_json(&c);
    assert_eq!(doc["events"].as_array().unwrap().len(), 50);
    assert_eq!(doc["sampling"]["scheme"]["seed"], 7);
}

#[test]
fn minkowski_core_checks_pass() {
    let dir = TempDir::new().unwrap();
    let d = dataset(&dir, "minkowski", &["--grid", "12x12"]);
    let out = kcausal(&["check", "--in", s(&d), "--check", "k-causal,lemma32,lemma43"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let names: Vec<String> = reports(&out).iter().map(|r| r["name"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["k-causal", "lemma32", "lemma43"]);
    assert!(reports(&out).iter().all(|r| r["margin"].is_number()));
}

#[test]
fn cylinder_is_not_k_causal() {
    let dir = TempDir::new().unwrap();
    let d = dataset(&dir, "cylinder:period=1", &["--grid", "6x6"]);
    let doc = read_json(&d);
    let n = doc["relations"]["K"]["n"].as_u64().unwrap() as usize;
    let k = kcausal::dataset::decode_relation(n, doc["relations"]["K"]["data"].as_str().unwrap()).unwrap();
    assert_eq!(k, kcausal::Rel::full(n));

    let out = kcausal(&["check", "--in", s(&d), "--check", "k-causal"]);
    assert_eq!(code(&out), 1);
    let witness = &reports(&out)[0]["witness"];
    assert_eq!(witness["kind"], "pair");
    assert_ne!(witness["p"], witness["q"]);
}

#[test]
fn tiny_radius_gives_transitive_closure_in_one_alternation() {
    let dir = TempDir::new().unwrap();
    let raw = path(&dir, "raw.json");
    let full = path(&dir, "full.json");
    kcausal(&["sample", "--model", "minkowski", "--grid", "10x10", "--out", s(&raw)]);
    let out = kcausal(&["relations", "--in", s(&raw), "--radius", "0.1", "--out", s(&full)]);
    assert_eq!(code(&out), 0);
    let doc = read_json(&full);
    assert_eq!(doc["iterations"], 1);
    let n = 100;
    let decode = |name: &str| {
        kcausal::dataset::decode_relation(n, doc["relations"][name]["data"].as_str().unwrap()).unwrap()
    };
    assert_eq!(decode("K"), decode("I").transitive_closure());
}

#[test]
fn comparisons_on_minkowski() {
    let dir = TempDir::new().unwrap();
    let d = dataset(&dir, "minkowski", &["--grid", "16x16"]);
    for (left, right) in [("k-alexandrov", "balls"), ("interval", "balls"), ("balls", "balls")] {
        let out = kcausal(&["compare", "--in", s(&d), "--left", left, "--right", right]);
        assert_eq!(code(&out), 0, "{left} vs {right}: {}", String::from_utf8_lossy(&out.stdout));
        let r = &reports(&out)[0];
        assert_eq!(r["name"], format!("compare-{left}-{right}"));
        assert!(r["details"]["restricted_points"].as_u64().unwrap() > 0);
    }
    let out = kcausal(&["compare", "--in", s(&d), "--left", "cones", "--right", "balls"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn joint_bicontinuity_fails_with_a_point_witness() {
    let dir = TempDir::new().unwrap();
    let d = dataset(&dir, "minkowski", &["--grid", "16x16"]);
    let out = kcausal(&["check", "--in", s(&d), "--check", "joint-bicontinuity"]);
    assert_eq!(code(&out), 1);
    let r = &reports(&out)[0];
    assert_eq!(r["witness"]["kind"], "point");
    assert!(!r["notes"].as_array().unwrap().is_empty());
}

#[test]
fn every_named_check_runs() {
    let dir = TempDir::new().unwrap();
    let d = dataset(&dir, "minkowski", &["--grid", "12x12"]);
    let all = "k-plus-certificate,k-causal,strong-k-causal,k-convexity,inner-continuity,outer-continuity,\
               lemma32,lemma43,interpolation,continuity,joint-bicontinuity,interval-vs-manifold,\
               alexandrov-vs-manifold,gh-poset,theorem46,theorem31";
    let out = kcausal(&["check", "--in", s(&d), "--check", all]);
    assert_eq!(code(&out), 1);
    let reports = reports(&out);
    let failing: Vec<&str> = reports
        .iter()
        .filter(|r| r["holds"] == false)
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["continuity", "joint-bicontinuity", "gh-poset"]);
    assert_eq!(reports.len(), 19);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let dir = TempDir::new().unwrap();
    let d = dataset(&dir, "minus-points:points=2/0", &["--n", "120", "--seed", "3"]);
    let run = || {
        let out = kcausal(&["check", "--in", s(&d), "--check", "k-causal,lemma43,strong-k-causal", "--seed", "5"]);
        let mut doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(doc["timing_ms"].is_object());
        doc.as_object_mut().unwrap().remove("timing_ms");
        doc
    };
    assert_eq!(run(), run());
}

#[test]
fn csv_output_has_one_row_per_report() {
    let dir = TempDir::new().unwrap();
    let d = dataset(&dir, "minkowski", &["--grid", "8x8"]);
    let report = path(&dir, "r.csv");
    let out = kcausal(&["check", "--in", s(&d), "--check", "k-causal,inner-continuity", "--format", "csv", "--out", s(&report)]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_path(&report).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["name", "holds", "margin", "witness", "details", "timing_ms"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][0], "k-causal");
    assert_eq!(std::fs::read(&report).unwrap(), out.stdout);
}

#[test]
fn dot_exports_parse() {
    let dir = TempDir::new().unwrap();
    let d = dataset(&dir, "minkowski", &["--grid", "5x5"]);
    for what in ["relation:K", "relation:I", "hasse"] {
        let dot = path(&dir, "g.dot");
        let out = kcausal(&["export", "--in", s(&d), "--what", what, "--format", "dot", "--out", s(&dot)]);
        assert_eq!(code(&out), 0);
        let text = std::fs::read_to_string(&dot).unwrap();
        let graph = dot_parser::canonical::Graph::from(dot_parser::ast::Graph::try_from(text.as_str()).unwrap());
        assert_eq!(graph.nodes.set.len(), 25);
    }
    let out = kcausal(&["export", "--in", s(&d), "--what", "relation:nosuch", "--format", "dot", "--out", s(&path(&dir, "x.dot"))]);
    assert_eq!(code(&out), 3);
}

#[test]
fn exit_codes_for_usage_and_io_errors() {
    let dir = TempDir::new().unwrap();
    let d = dataset(&dir, "minkowski", &["--grid", "4x4"]);
    assert_eq!(code(&kcausal(&["check", "--in", s(&d), "--check", "nosuch"])), 2);
    assert_eq!(code(&kcausal(&["sample", "--model", "minkowski", "--grid", "ten", "--out", "x.json"])), 2);
    assert_eq!(code(&kcausal(&["sample", "--model", "torus", "--grid", "4x4", "--out", "x.json"])), 2);
    assert_eq!(code(&kcausal(&["frobnicate"])), 2);
    let missing = path(&dir, "missing.json");
    assert_eq!(code(&kcausal(&["check", "--in", s(&missing), "--check", "k-causal"])), 3);
    let garbage = path(&dir, "garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(code(&kcausal(&["relations", "--in", s(&garbage), "--out", s(&path(&dir, "o.json"))])), 3);
    let unwritable = dir.path().join("no/such/dir/out.json");
    assert_eq!(code(&kcausal(&["sample", "--model", "minkowski", "--grid", "4x4", "--out", s(&unwritable)])), 3);

    // A dataset without relations cannot be checked.
    let raw = path(&dir, "raw.json");
    kcausal(&["sample", "--model", "minkowski", "--grid", "4x4", "--out", s(&raw)]);
    assert_eq!(code(&kcausal(&["check", "--in", s(&raw), "--check", "k-causal"])), 2);
}
