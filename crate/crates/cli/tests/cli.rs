use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irvzone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn labels(v: &Value) -> Vec<String> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| match x {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect()
}

#[test]
fn min_zone_of_path6_file() {
    let out = run(&["min-zone", "--graph", &data("path6.g6")]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["zone"], serde_json::json!([2, 3, 4, 5]));
    assert_eq!(j["kind"], "minimal");
}

#[test]
fn census_of_trees_on_eight_nodes() {
    let out = run(&["census", "--kind", "trees", "--n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["n,universe,nontrivial,two_node", "8,23,22,6"]);
}

#[test]
fn census_range_and_limits() {
    let out = run(&["census", "--kind", "graphs", "--n", "3..5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "n,universe,nontrivial,two_node\n3,2,0,0\n4,6,2,1\n5,21,12,2\n");
    assert_eq!(run(&["census", "--kind", "graphs", "--n", "8"]).status.code(), Some(2));
    assert_eq!(run(&["census", "--kind", "trees", "--n", "13"]).status.code(), Some(2));
    assert_eq!(run(&["census", "--kind", "forests", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn check_zone_failure_carries_a_counterexample() {
    let out = run(&["check-zone", "--graph", &data("path6.g6"), "--set", "3,4"]);
    assert_eq!(out.status.code(), Some(1));
    let j = json_of(&out);
    assert_eq!(j["verdict"], "not_zone");
    assert!(j["counterexample"].is_object());

    let ok = run(&["check-zone", "--graph", &data("path6.g6"), "--set", "2,3,4,5"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(json_of(&ok)["counterexample"].is_null());
}

#[test]
fn counterexamples_replay_through_irv() {
    for (graph, set) in [("path:6", "3,4"), ("path:7", "4"), ("bistar:3", "1"), ("binary-tree:2", "1,2"), ("cycle:5", "1,2,3,4")] {
        let out = run(&["check-zone", "--family", graph, "--set", set]);
        assert_eq!(out.status.code(), Some(1), "{graph} {set}");
        let cx = &json_of(&out)["counterexample"];
        let config = labels(&cx["configuration"]).join(",");
        let elim = labels(&serde_json::json!([cx["eliminated"]]))[0].clone();
        let zone: Vec<String> = set.split(',').map(String::from).collect();

        // The zone member is weakly last in the first round ...
        let irv = run(&["irv", "--family", graph, "--candidates", &config]);
        assert_eq!(irv.status.code(), Some(0));
        let j = json_of(&irv);
        assert!(labels(&j["rounds"][0]["tied_for_last"]).contains(&elim));
        // ... so some tiebreak elects a node outside the zone.
        let escapes = labels(&j["possible_winners"]);
        assert!(escapes.iter().any(|w| !zone.contains(w)), "{graph}: {escapes:?}");
    }
}

#[test]
fn exit_codes() {
    let p6 = data("path6.g6");
    assert_eq!(run(&["min-zone"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["min-zone", "--graph", "/nonexistent.g6"]).status.code(), Some(2));
    assert_eq!(run(&["min-zone", "--graph", "graph.txt"]).status.code(), Some(2));
    assert_eq!(run(&["check-zone", "--graph", &p6, "--set", "7"]).status.code(), Some(2));
    assert_eq!(run(&["min-zone", "--graph", &p6, "--threads", "0"]).status.code(), Some(2));
    assert_eq!(run(&["min-zone", "--graph", &p6, "--budget-c", "0"]).status.code(), Some(2));
    assert_eq!(run(&["min-zone", "--graph", &p6, "--format", "csv"]).status.code(), Some(2));
    // The complement of {3,4} has four nodes.
    assert_eq!(run(&["check-zone", "--graph", &p6, "--set", "3,4", "--budget-c", "3"]).status.code(), Some(3));
    assert_eq!(run(&["min-zone", "--family", "bistar:3", "--budget-c", "2"]).status.code(), Some(3));
    assert_eq!(run(&["check-approx", "--graph", &p6, "--set", "3,4"]).status.code(), Some(1));
    assert_eq!(run(&["check-approx", "--graph", &p6, "--set", "2,3,4,5"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["geo", "verify-chain", "--help"]).status.code(), Some(0));
}

#[test]
fn errors_are_json_on_stderr_when_asked() {
    let out = run(&["check-zone", "--family", "path:6", "--set", "9", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "input");
    assert_eq!(e["error"]["exit_code"], 2);

    let out = run(&["min-zone", "--family", "bistar:3", "--budget-c", "2", "--format=json"]);
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "budget");
    assert_eq!(e["error"]["exit_code"], 3);

    let out = run(&["min-zone", "--bogus", "--format", "json"]);
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "usage");

    let out = run(&["check-zone", "--family", "path:6", "--set", "9", "--format", "text"]);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error: "));
}

#[test]
fn edge_lists_with_text_labels() {
    let f = data("friends.edges");
    // Symmetrized, the nominations form a cycle plus a separate pair.
    assert_eq!(run(&["min-zone", "--graph", &f]).status.code(), Some(2));
    let out = run(&["min-zone", "--graph", &f, "--mutual", "--largest-component"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["n"], 5);
    assert_eq!(j["zone"], serde_json::json!(["bob", "cat", "dan"]));
    let out = run(&["check-zone", "--graph", &f, "--mutual", "--largest-component", "--set", "bob,cat,dan"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn family_verification() {
    for spec in ["path:7", "bistar:2", "binary-tree:2", "cycle:5", "complete:4"] {
        let out = run(&["family", spec, "--verify"]);
        assert_eq!(out.status.code(), Some(0), "{spec}");
        assert_eq!(json_of(&out)["agrees"], true);
    }
    let j = json_of(&run(&["family", "cycle:6"]));
    assert_eq!(j["trivial"], true);
    assert_eq!(j["all_pairwise_ties"], true);
    assert_eq!(run(&["family", "path:0"]).status.code(), Some(2));
}

#[test]
fn gadget_checks() {
    let out = run(&["gadget", "--instance", &data("rx3c_single.txt"), "--check", "--graph6"]);
    assert_eq!(out.status.code(), Some(1));
    let j = json_of(&out);
    assert_eq!(j["nodes"], 25);
    assert_eq!(j["check"]["verdict"], "not_zone");
    // The emitted graph replays the counterexample.
    let dir = tempfile::tempdir().unwrap();
    let g6 = dir.path().join("gadget.g6");
    std::fs::write(&g6, j["graph6"].as_str().unwrap()).unwrap();
    let order = labels(&j["labels"]);
    let renumber = |l: &String| (order.iter().position(|x| x == l).unwrap() + 1).to_string();
    let cx = &j["check"]["counterexample"];
    let config: Vec<String> = labels(&cx["configuration"]).iter().map(renumber).collect();
    let irv = run(&["irv", "--graph", g6.to_str().unwrap(), "--candidates", &config.join(",")]);
    assert_eq!(irv.status.code(), Some(0));
    let pair: Vec<String> = labels(&j["winning_pair"]).iter().map(renumber).collect();
    assert!(labels(&json_of(&irv)["possible_winners"]).iter().any(|w| !pair.contains(w)));
}

#[test]
fn outputs_are_reproducible_across_runs_and_threads() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["approx-zone", "--family", "binary-tree:2"],
        vec!["check-approx", "--family", "path:8", "--set", "3,4,5,6"],
        vec!["irv", "--family", "cycle:6", "--tiebreak", "seeded"],
        vec!["census", "--kind", "graphs", "--n", "5", "--format", "json"],
        vec!["geo", "verify-chain", "--chain", "rect_l1(2)", "--samples", "50000"],
        vec!["geo", "verify-flag", "--configs", "40", "--samples", "20000"],
        vec!["geo", "verify-condorcet", "--dims", "2,1", "--p", "1", "--opponents", "20", "--samples", "20000"],
        vec!["geo", "irv", "--candidates", "0.5 0.5; 0.2 0.5; 0.8 0.5", "--samples", "20000"],
    ];
    for args in cases {
        let first = run(&args);
        assert!(first.status.code().unwrap() <= 1, "{args:?}");
        for threads in ["1", "3"] {
            let mut a = args.clone();
            a.extend(["--threads", threads]);
            let again = run(&a);
            assert_eq!(first.stdout, again.stdout, "{args:?} with {threads} threads");
            assert_eq!(first.status.code(), again.status.code());
        }
    }
}

#[test]
fn seeds_change_sampled_outputs() {
    let a = run(&["geo", "shares", "--candidates", "0.3 0.5; 0.7 0.5", "--samples", "1000"]);
    let b = run(&["geo", "shares", "--candidates", "0.3 0.5; 0.7 0.5", "--samples", "1000", "--seed", "7"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn text_and_csv_formats() {
    let out = run(&["all-zones", "--family", "path:4", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "size,zone\n2,2 3\n4,1 2 3 4\n");
    let out = run(&["pairwise", "--family", "path:4", "1", "3", "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 3/2 vs 3 5/2: 3 wins\n");
    let out = run(&["geo", "verify-chain", "--chain", "square_l2", "--format", "csv", "--samples", "100000"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("step,tag,eliminated"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn irv_tiebreak_policies() {
    let order = json_of(&run(&["irv", "--family", "path:2", "--tiebreak", "order:2,1"]));
    assert_eq!(order["winner"], 1);
    let steer = json_of(&run(&["irv", "--family", "cycle:4", "--tiebreak", "branch:3"]));
    assert_eq!(steer["winner"], 3);
    assert_eq!(steer["possible_winners"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(run(&["irv", "--family", "path:3", "--tiebreak", "coin"]).status.code(), Some(2));
}
