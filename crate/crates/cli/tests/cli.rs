use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropconic")).args(args).output().expect("binary runs")
}

fn results(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schemaVersion"], 1);
    doc["results"].clone()
}

#[test]
fn eval_of_a_generic_triple_has_twenty_entries() {
    let r = results(&["eval", "--points", "4,3;3,-1;0,0"]);
    assert_eq!(r["arity"], 3);
    assert_eq!(r["generic"], true);
    assert_eq!(r["raw"].as_object().unwrap().len(), 20);
    assert_eq!(r["threeTermRelations"], true);
}

#[test]
fn coincident_pair_maps_to_zero() {
    let r = results(&["eval", "--points", "0,0;0,0"]);
    assert_eq!(r["generic"], false);
    let reduced = r["reduced"].as_object().unwrap();
    assert_eq!(reduced.len(), 15);
    assert!(reduced.values().all(|v| v == "0"));
}

#[test]
fn eval_checks_requested_arity() {
    let out = run(&["eval", "--points", "0,0;1,2", "--arity", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_reports_types() {
    let r = results(&["classify", "--points", "2,3;3,1;0,0"]);
    assert_eq!(r["typeId"], 17);
    assert_eq!(r["planeType"], "EEEG");
    let r = results(&["classify", "--points", "5,6;2,1;0,0"]);
    assert_eq!(r["typeId"], 7);
    assert_eq!(r["planeType"], "EEFF(a)");
    let r = results(&["classify", "--points", "0,0;1,1;2,2"]);
    assert_eq!(r["typeId"], "Boundary");
    assert_eq!(r["generic"], false);
}

#[test]
fn hexagon_for_pairs() {
    let r = results(&["polytope", "--arity", "2"]);
    assert_eq!(r["fVector"], serde_json::json!([12, 12]));
    assert_eq!(r["centrallySymmetric"], true);
}

#[test]
fn slice_covers_the_box_and_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("slice.svg");
    let r = results(&["slice", "--y", "2,3", "--box", "-6,10,-6,10", "--svg", svg.to_str().unwrap()]);
    assert_eq!(r["planeTypes"].as_array().unwrap().len(), 6);
    assert_eq!(r["tilesBox"], true);
    assert_eq!(r["adjacency"]["connected"], true);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml") && text.trim_end().ends_with("</svg>"));
    assert_eq!(text.matches("<polygon").count(), r["cells"].as_array().unwrap().len());
}

#[test]
fn degenerate_slice_is_rejected() {
    let out = run(&["slice", "--y", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_input_exits_with_two() {
    for args in [
        &["eval", "--points", "1,x;2,3"][..],
        &["eval", "--points", "1/0,1;2,3"],
        &["eval", "--points", "1,2"],
        &["classify", "--points", "0,0;1,2"],
        &["polytope", "--arity", "4"],
        &["slice", "--box", "1,0,0,1"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes() {
    let r = results(&["verify", "--samples", "50", "--seed", "3"]);
    assert_eq!(r["resolvedConvention"], "plain-minor");
    assert_eq!(r["tropicalFuzz"]["failures"], serde_json::json!([]));
    assert_eq!(r["negativeControl"]["detected"], r["negativeControl"]["total"]);
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = ["classify", "--points", "4,6;2,3;0,0"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert!(a == b, "two runs differ");
    let doc: Value = serde_json::from_slice(&a).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(doc, again);
    assert_eq!(doc["hash"].as_str().unwrap().len(), 64);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["eval", "--points", "0,0;1,3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["command"], "eval");
}
