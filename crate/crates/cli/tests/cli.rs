use std::process::{Command, Output};

use graphfactor::census::TheoremReport;
use graphfactor::graph::{complete, cycle, matching};
use graphfactor::{encode_graph6, ConditionReport, WitnessRecord};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphfactor")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn g6(g: &graphfactor::Graph) -> String {
    encode_graph6(g).unwrap()
}

#[test]
fn check_rules_out_a_single_edge() {
    let out = run(&["check", "--graph6", "A_"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("R1 ruled_out"), "{text}");
    assert!(text.contains("verdict: ruled_out"));

    let out = run(&["check", "--graph6", "A_", "--json"]);
    let report: ConditionReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.is_ruled_out());
}

#[test]
fn factor_six_cycle_lists_the_pair() {
    let c6 = g6(&cycle(6).unwrap());
    let out = run(&["factor", "--graph6", &c6, "--all"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verdict: yes"), "{text}");
    let k3 = complete(3).unwrap();
    let triangles = graphfactor::canon::canonical_graph(&k3.disjoint_union(&k3).unwrap()).unwrap();
    let three = graphfactor::canon::canonical_graph(&matching(3).unwrap()).unwrap();
    assert!(text.contains(&g6(&triangles)) && text.contains(&g6(&three)), "{text}");
}

#[test]
fn factor_json_round_trips_witnesses() {
    let c6 = g6(&cycle(6).unwrap());
    let out = run(&["factor", "--graph6", &c6, "--all", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "yes");
    let ws: Vec<WitnessRecord> = serde_json::from_value(v["witnesses"].clone()).unwrap();
    assert_eq!(ws.len(), 2);
    for w in ws {
        assert!(w.to_factorization().is_ok());
    }
}

#[test]
fn factor_reads_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p3.txt");
    std::fs::write(&path, "# a path\n0 1\n1 2\n").unwrap();
    let out = run(&["factor", "--edges", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: no"));

    // an explicit order adds isolated vertices
    let out = run(&["factor", "--edges", path.to_str().unwrap(), "--order", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("n=5"), "{}", stdout(&out));
    let out = run(&["factor", "--edges", path.to_str().unwrap(), "--order", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn counterexample_reports_both_radii() {
    let out = run(&["construct", "--kind", "counterexample", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("lambda_max(G) = 2\n"), "{text}");
    assert!(text.contains("= 2 * 2 = 4\n"), "{text}");
    assert!(text.contains("validation: 0 violations"));
}

#[test]
fn doubled_graph_needs_non_bipartite_input() {
    let out = run(&["construct", "--kind", "double", "--graph6", &g6(&complete(3).unwrap())]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["construct", "--kind", "double", "--graph6", &g6(&cycle(4).unwrap())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bipartite"));
}

#[test]
fn spectral_output() {
    let out = run(&["spectral", "--graph6", &g6(&cycle(4).unwrap())]);
    let text = stdout(&out);
    assert!(text.contains("spectrum: 2 0 0 -2"), "{text}");
    assert!(text.contains("bipartite: true"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["check", "--graph6", "A_", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));
    assert_eq!(run(&["check"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn census_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let out = run(&["census", "--order", "5", "--out", a.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("34 classes"));
    run(&["census", "--order", "5", "--out", b.to_str().unwrap(), "--seed", "7", "--jobs", "2"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = run(&["verify", "--catalog", a.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: TheoremReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.is_clean());
    assert_eq!(report.records, 34);

    let text = std::fs::read_to_string(&a).unwrap();
    std::fs::write(&b, text.replacen("\"verdict\":\"no\"", "\"verdict\":\"yes\"", 1)).unwrap();
    let out = run(&["verify", "--catalog", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["census", "--order", "8", "--out", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
