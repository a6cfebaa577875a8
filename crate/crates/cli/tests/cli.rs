use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn brauer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brauer")).args(args).output().unwrap()
}

fn brauer_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_brauer"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn cartan_of_single_edge() {
    let v = json(&brauer(&["cartan", &fixture("single_edge.json")]));
    assert_eq!(v["matrix"], serde_json::json!([["2"]]));
}

#[test]
fn compare_separates_the_nine_edge_pair() {
    let v = json(&brauer(&["compare", &fixture("c_tvee_9.json"), &fixture("c_mut_9.json")]));
    assert_eq!(v["verdict"], "NotDerivedEquivalent");
    assert_eq!(v["witness"]["invariant"], "n_zero");
    assert_eq!((v["witness"]["left"].as_u64(), v["witness"]["right"].as_u64()), (Some(5), Some(4)));
}

#[test]
fn compare_separates_the_eight_edge_pair() {
    let v = json(&brauer(&["compare", &fixture("c_tvee_8.json"), &fixture("c_mut_8.json")]));
    assert_eq!(v["verdict"], "NotDerivedEquivalent");
}

#[test]
fn kauer_then_compare_with_flip() {
    let k = brauer(&["kauer", "--edge", "diag", &fixture("square_diag.json")]);
    assert!(k.status.success());
    let dir = std::env::temp_dir().join(format!("brauer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let moved = dir.join("moved.json");
    std::fs::write(&moved, &k.stdout).unwrap();
    let v = json(&brauer(&["compare", moved.to_str().unwrap(), &fixture("square_tri.json")]));
    assert_eq!(v["isomorphic"], true);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn angulation_input_goes_through_the_ribbon_graph() {
    let v = json(&brauer(&["surface", &fixture("pentagon.json")]));
    assert_eq!(v["genus"], 0);
    let labeled = json(&brauer(&["orbit", "--depth", "5", "--dedup", "labeled", &fixture("pentagon.json")]));
    let iso = json(&brauer(&["orbit", "--depth", "5", &fixture("pentagon.json")]));
    assert_eq!(labeled["nodes"].as_array().unwrap().len(), 5);
    assert_eq!(iso["nodes"].as_array().unwrap().len(), 1);
}

#[test]
fn stdin_is_accepted() {
    let text = std::fs::read_to_string(fixture("triangle.json")).unwrap();
    let v = json(&brauer_stdin(&["surface", "-"], &text));
    assert!(v["genus"].is_number());
}

#[test]
fn parse_errors_exit_with_two() {
    let out = brauer_stdin(&["validate", "-"], "{\"vertices\": ");
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "parse");
}

#[test]
fn domain_errors_exit_with_one() {
    let out = brauer(&["kauer", "--edge", "nope", &fixture("triangle.json")]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["message"].as_str().unwrap().contains("nope"));
    let out = brauer(&["dual-kauer", "--edge", "b", &fixture("config_tree.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dot_output_is_deterministic() {
    let args = ["--format", "dot", "quiver", &fixture("triangle.json")];
    let (a, b) = (brauer(&args), brauer(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), 6);
}

#[test]
fn tilting_report_passes_on_the_configuration_tree() {
    let v = json(&brauer(&["tilting", "--edge", "a", &fixture("config_tree.json")]));
    assert_eq!(v["report"]["rigid"], true);
    assert_eq!(v["report"]["generation_witness"], true);
    assert_eq!(v["end_cartan_matches"], true);
}

#[test]
fn invariants_as_text() {
    let out = brauer(&["--format", "text", "invariants", &fixture("c_tvee_8.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("det: 4"));
    assert!(text.contains("n_zero=0"));
}
