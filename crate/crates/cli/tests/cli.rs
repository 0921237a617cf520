use std::path::PathBuf;
use std::process::{Command, Output};

fn godel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_godel")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_err_line(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap().lines().next().unwrap_or_default().to_string()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("godel-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn free_on_one_generator() {
    let o = godel(&["free", "--generators", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "dual: 3 elements; algebra: 6 elements\n");
}

#[test]
fn free_on_three_generators_is_counted() {
    let o = godel(&["free", "--generators", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "dual: 51 elements; algebra: 137186159382 elements (counted)\n");
}

#[test]
fn free_certifies_into_a_target() {
    let o = godel(&["free", "--lattice", "d4", "--into", "threechain"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("free: PASS"));
}

#[test]
fn depth_of_two_three_chains() {
    let o = godel(&["depth", "--alg", "threechain", "--alg", "threechain"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "formula 3, computed 3\n");
}

#[test]
fn z_iso_on_d4() {
    let o = godel(&["check", "z-iso", "--poset", "d4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "11 ↔ 11, isomorphism verified\n");
    let o = godel(&["nerve", "--poset", "d4", "--check", "z-iso"]);
    assert_eq!(stdout(&o), "11 ↔ 11, isomorphism verified\n");
}

#[test]
fn duals() {
    let l = temp_file("three.json", r#"{"poset":{"size":2,"covers":[[0,1]]}}"#);
    let o = godel(&["dual", "--lattice", l.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("poset: 2 elements\n"));
    assert_eq!(stdout(&godel(&["dual", "--lattice", "onechain"])), "empty poset\n");
    let o = godel(&["dual", "--poset", "d4"]);
    assert!(stdout(&o).starts_with("lattice: 6 elements\ngodel: false\n"));
}

#[test]
fn cycle_is_rejected() {
    let p = temp_file("cycle.json", r#"{"size":2,"covers":[[0,1],[1,0]]}"#);
    let o = godel(&["dual", "--poset", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(first_err_line(&o), "ERROR invalid antisymmetry violated");
}

#[test]
fn malformed_input_and_usage() {
    let p = temp_file("bad.json", "{ not json");
    let o = godel(&["nerve", "--poset", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(first_err_line(&o).starts_with("ERROR invalid malformed JSON"));
    let o = godel(&["check", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(first_err_line(&o).starts_with("ERROR invalid unknown suite"));
    let o = godel(&["free"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(first_err_line(&o).starts_with("ERROR usage"));
    let o = godel(&["depth", "--alg", "threechain", "--cap-chains", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(first_err_line(&o).starts_with("ERROR usage"));
}

#[test]
fn caps_surface_as_resource_errors() {
    let o = godel(&["nerve", "--poset", "cube-3", "--cap-chains", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(first_err_line(&o), "ERROR resource chains reached 10");
    let o = godel(&["free", "--generators", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(first_err_line(&o).starts_with("ERROR resource generators"));
}

#[test]
fn preconditions_are_reported() {
    let o = godel(&["coproduct", "--alg", "d4", "--alg", "twochain"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(first_err_line(&o).starts_with("ERROR precondition"));
}

#[test]
fn structured_output_is_deterministic() {
    let args = ["check", "basic-upsets", "--poset", "d4", "--seed", "7", "--format", "structured"];
    let a = godel(&args);
    let b = godel(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    for key in ["command", "inputs", "result", "certificates"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["certificates"][0]["failed"], 0);
}

#[test]
fn graph_output() {
    let o = godel(&["nerve", "--poset", "chain-2", "--format", "graph"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph \"nerve\" {"));
    assert_eq!(dot.matches(" -> ").count(), 2);
    let o = godel(&["depth", "--alg", "point", "--format", "graph"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("godel-cli-{}-out.txt", std::process::id()));
    let o = godel(&["coproduct", "--alg", "threechain", "--alg", "threechain", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("tensor: 6 chains; algebra: "));
    assert!(text.contains("depth: 3\n"));
}

#[test]
fn named_suites_pass_on_small_inputs() {
    for suite in ["box-diamond", "twohead", "implication", "upsets", "product", "roundtrip"] {
        let o = godel(&["check", suite, "--poset", "chain-2", "--poset", "antichain-2"]);
        assert!(o.status.success(), "{suite}: {}", first_err_line(&o));
        assert!(stdout(&o).contains("PASS"), "{suite}");
    }
}
