use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn silt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_silt")).env_remove("SILT_FIELD").args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_regular_is_tilting() {
    let o = silt(&["--algebra", "a2", "check", "A"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tilting: true"));
}

#[test]
fn check_reads_its_own_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = silt(&["--algebra", "a2", "check", "A", "--format", "json"]);
    let file = write(dir.path(), "A.json", &stdout(&o));
    let o = silt(&["--algebra", "a2", "check", &file]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("tilting: true"), "{text}");
    assert!(text.contains("certificate: verified"));
}

#[test]
fn presentation_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let pres = r#"{"vertices": ["1", "2"], "arrows": [{"name": "a", "from": "1", "to": "2"}], "path_length_cap": 3}"#;
    let file = write(dir.path(), "a2.json", pres);
    let o = silt(&["--algebra", &file, "check", "A"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tilting: true"));
}

#[test]
fn bb_at_an_injective_simple_fails() {
    let o = silt(&["--algebra", "a2", "--json-errors", "bb", "--vertex", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "SimpleIsInjective");
    assert_eq!(err["exit"], 1);
}

#[test]
fn quiver_depth_one_on_ab0() {
    let o = silt(&["--algebra", "ab0", "quiver", "--depth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph silting {"));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 3);
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 2);
}

#[test]
fn quiver_json_is_deterministic() {
    let args = ["--algebra", "a3", "quiver", "--depth", "2", "--dir", "both", "--format", "json"];
    let (a, b) = (silt(&args), silt(&args));
    assert_eq!(a.stdout, b.stdout);
    let g: Value = serde_json::from_slice(&a.stdout).unwrap();
    for n in g["nodes"].as_array().unwrap() {
        for key in ["id", "summands", "labels", "certificate", "gamma", "shift_normal_form"] {
            assert!(n.get(key).is_some(), "missing {key}");
        }
    }
    let o = silt(&["--algebra", "dual-numbers", "quiver", "--depth", "2", "--dir", "both", "--mod-shift", "--format", "json"]);
    let g: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(g["nodes"].as_array().unwrap().len(), 1);
}

#[test]
fn mutation_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = silt(&["--algebra", "ab0", "mutate", "--at", "P1", "--dir", "left", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let file = write(dir.path(), "mu.json", &stdout(&o));
    let o = silt(&["--algebra", "ab0", "check", &file]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("summands: P2 + C2[1]"), "{}", stdout(&o));
    // Mutating at every summand is the shift.
    let o = silt(&["--algebra", "ab0", "mutate", "--object", &file, "--at", &file, "--dir", "left"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("summands: P2[1] + C2[2]"), "{}", stdout(&o));
    let o = silt(&["--algebra", "ab0", "compare", "A", &file]);
    assert_eq!(stdout(&o).trim(), "greater");
    let o = silt(&["--algebra", "ab0", "compare", &file, "A"]);
    assert_eq!(stdout(&o).trim(), "less");
}

#[test]
fn gamma_on_a_shifted_base() {
    let o = silt(&["--algebra", "a2", "gamma", "--base", "P1[1]+P2", "P1", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["gamma"], serde_json::json!([-1, 0]));
}

#[test]
fn okuyama_rickard_and_braids() {
    let o = silt(&["--algebra", "a3", "or", "--idempotent", "1,2", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tilting"], true);
    assert_eq!(v["matches_mutation"], true);
    let o = silt(&["--algebra", "a3", "exc", "braid", "--word", "s1,s2^-1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = silt(&["--algebra", "ab0", "exc", "braid", "--word", "s1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn probe_finds_paths_within_budget() {
    let o = silt(&["--algebra", "a2", "exc", "probe", "A", "A[1]", "--budget", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("path of length 2"));
    let o = silt(&["--algebra", "a2", "--json-errors", "exc", "probe", "A", "A[1]", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "ProbeExhausted");
}

#[test]
fn non_silting_input_fails() {
    let o = silt(&["--algebra", "a2", "check", "P1+P1[1]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("presilting: false"));
}

#[test]
fn input_errors_exit_two() {
    for args in [
        vec!["--algebra", "a2", "--field", "4", "check", "A"],
        vec!["--algebra", "nonsense", "check", "A"],
        vec!["check", "A"],
        vec!["--algebra", "a2", "check", "Q7"],
        vec!["--algebra", "a2", "exc", "braid", "--word", "t1"],
        vec!["--algebra", "a2", "mutate", "--at", "P1[2]", "--dir", "left"],
        vec!["--algebra", "a2", "frobnicate"],
    ] {
        let o = silt(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = silt(&["--json-errors", "--algebra", "a2", "--field", "4", "check", "A"]);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "BadField");
}

#[test]
fn field_comes_from_the_environment() {
    let run = |f: &str| {
        Command::new(env!("CARGO_BIN_EXE_silt")).env("SILT_FIELD", f).args(["--algebra", "a2", "quiver", "--depth", "1", "--format", "json"]).output().unwrap()
    };
    let o = run("Q");
    let g: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(g["field"], "Q");
    let o = run("5");
    let g: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(g["field"], "GF(5)");
    assert_eq!(run("9").status.code(), Some(2));
}
