use std::process::Command;

use cbswb_cli::{execute, Report, Verdict};

fn run(args: &[&str]) -> (String, String, i32) {
    execute(std::iter::once("cbswb").chain(args.iter().copied()), None)
}

fn json(args: &[&str]) -> (Report, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (out, err, code) = run(&full);
    assert!(err.is_empty(), "{err}");
    (Report::from_json(&out).expect("json report parses"), code)
}

#[test]
fn con_z4_canonical_order() {
    let (out, _, code) = run(&["con", "corpus/z4.json"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "  Z4: 3 congruences");
    assert_eq!(&lines[2..5], ["  0: [[0],[1],[2],[3]]", "  1: [[0,2],[1,3]]", "  2: [[0,1,2,3]]"]);
}

#[test]
fn fc_v4_refutes_bfc() {
    let (r, code) = json(&["fc", "corpus/v4.json"]);
    assert_eq!(code, 1);
    assert_eq!(r.verdict, Verdict::Refuted);
    assert_eq!(r.data["factor_congruences"]["entries"].as_array().unwrap().len(), 5);
    assert_eq!(r.data["bfc"]["holds"], false);
    let cx = &r.data["bfc"]["counterexample"];
    assert_eq!(cx["kind"], "non_unique_complement");
    assert_eq!(cx["complements"].as_array().unwrap().len(), 2);
}

#[test]
fn iso_z4_v4() {
    let (out, _, code) = run(&["iso", "corpus/z4.json", "corpus/v4.json"]);
    assert_eq!(code, 1);
    assert!(out.contains("no isomorphism"));
    let (r, code) = json(&["iso", "z6", "z6"]);
    assert_eq!(code, 0);
    assert_eq!(r.data["map"], serde_json::json!([0, 1, 2, 3, 4, 5]));
}

#[test]
fn omega_demo_worked_run() {
    let (r, code) = json(&["omega-demo", "--base", "corpus/z2.json", "--shift", "2", "--zeta", "{0}"]);
    assert_eq!(code, 0, "{:?}", r.summary);
    assert_eq!(r.data["run"]["sigma_zeta"], "prefix=1;period=2;residues={1}");
    assert!(r.summary.iter().any(|l| l == "σ_ζ = {0} ∪ {x ≥ 1 : x mod 2 ∈ {1}}"));
    let t = r.data["truncations"].as_array().unwrap();
    assert_eq!(t.len(), 2);
    assert!(t.iter().all(|v| v["passed"] == true));
}

#[test]
fn quotient_and_bad_literal() {
    let (r, code) = json(&["quotient", "z4", "[[0,2],[1,3]]"]);
    assert_eq!(code, 0);
    assert_eq!(r.data["reps"], serde_json::json!([0, 1]));
    let (r, code) = json(&["quotient", "z4", "[[0,1],[2,3]]"]);
    assert_eq!(code, 1);
    assert!(r.data["witness"].as_str().unwrap().contains("+"));
}

#[test]
fn verdicts_of_other_verbs() {
    assert_eq!(run(&["center", "lattice2x2"]).2, 0);
    assert_eq!(run(&["zcon", "v4"]).2, 0);
    assert_eq!(run(&["quasicyclic", "--p", "3", "--n", "2", "--m", "5"]).2, 0);
    assert_eq!(run(&["cbs-complete", "v4", "--kind", "fc"]).2, 0);
    assert_eq!(run(&["cbs-check", "z2", "--kind", "con"]).2, 0);
    assert_eq!(run(&["presheaf-check", "v4", "--kind", "fc", "--factor"]).2, 0);
    assert_eq!(run(&["presheaf-check", "v4", "--kind", "fc", "--boolean"]).2, 1);
    assert_eq!(run(&["presheaf-check", "s3", "--kind", "relative", "--axiom", "(* x y) = (* y x)"]).2, 1);
    let t = "(join (meet z x) (meet (not z) y))";
    assert_eq!(run(&["church", "ba4", "--term", t, "--zero", "0", "--one", "3"]).2, 0);
    assert_eq!(run(&["church", "ba2", "--term", t, "--zero", "1", "--one", "0"]).2, 1);
}

#[test]
fn usage_and_resource_errors() {
    let (_, err, code) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    assert_eq!(run(&["con", "no/such/algebra.json"]).2, 2);
    assert_eq!(run(&["--max-size", "0", "con", "z4"]).2, 2);
    let (_, err, code) = run(&["--max-size", "3", "con", "z4"]);
    assert_eq!(code, 2);
    assert!(err.contains("budget") || err.contains("limit"), "{err}");
    let (_, _, code) = execute(["cbswb", "con", "z4"], Some("con=2"));
    assert_eq!(code, 2);
    let (_, _, code) = execute(["cbswb", "--max-size", "8", "con", "z4"], Some("con=2"));
    assert_eq!(code, 0);
    assert_eq!(execute(["cbswb", "con", "z4"], Some("bogus=1")).2, 2);
}

#[test]
fn deterministic_output() {
    for args in [vec!["fc", "v4"], vec!["--format", "json", "omega-demo", "--base", "z2", "--shift", "2"]] {
        assert_eq!(run(&args), run(&args));
    }
}

#[test]
fn json_round_trips() {
    for args in [vec!["con", "n5"], vec!["fc", "v4"], vec!["--timing", "zcon", "m3"]] {
        let (r, _) = json(&args);
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(r.schema, cbswb_cli::SCHEMA);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cbswb");
    let out = Command::new(bin).args(["iso", "z4", "v4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("no isomorphism"));
    let out = Command::new(bin).args(["con", "z4"]).env("CBSWB_BUDGET", "con=3").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = Command::new(bin).args(["con", "z4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
