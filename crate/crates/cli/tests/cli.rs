use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tfsm_cli::{
    run_command, Output, EXIT_ABSENT, EXIT_BUDGET, EXIT_OK, EXIT_UNSUPPORTED, EXIT_USAGE,
};

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "corpus", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    run_command(std::iter::once("tfsm").chain(args.iter().copied()))
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {out:?}"))
}

fn temp_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("tfsm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn binary_exit_codes_match_the_library() {
    let bin = env!("CARGO_BIN_EXE_tfsm");
    let s2 = corpus("S2.tfsm");
    let out = Command::new(bin)
        .args(["derive", "--goal", "hs", "--method", "tree", &s2])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        run(&["derive", "--goal", "hs", "--method", "tree", &s2]).stdout
    );
    let out = Command::new(bin)
        .args([
            "derive",
            "--goal",
            "hs",
            "--method",
            "point",
            &corpus("B4.tfsm"),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_ABSENT));
    let out = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn exhausted_budget_is_reported_separately() {
    let out = Command::new(env!("CARGO_BIN_EXE_tfsm"))
        .env("TFSM_NODE_BUDGET", "1")
        .args([
            "derive",
            "--goal",
            "hs",
            "--method",
            "point",
            &corpus("B4.tfsm"),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BUDGET));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exists"], Value::Null);
    assert!(String::from_utf8(out.stderr).unwrap().contains("budget"));
}

#[test]
fn rationals_are_strings() {
    let v = json(&run(&[
        "check",
        "--goal",
        "ss",
        "--seq",
        "i1@2,i1@4.0,i1@6",
        &corpus("S1.tfsm"),
    ]));
    assert_eq!(v["verified"], true);
    assert_eq!(
        v["sequence"][1],
        serde_json::json!({"input": "i1", "t": "4/1"})
    );
    let v = json(&run(&[
        "check",
        "--goal",
        "hs",
        "--seq",
        "i1@1.5,i2@3",
        &corpus("S3.tfsm"),
    ]));
    assert_eq!(v["sequence"][0]["t"], "3/2");
    assert_eq!(v["verified"], true);
}

#[test]
fn simulate_groups_concurrent_outputs() {
    let out = run(&[
        "simulate",
        "--from",
        "s0",
        "--seq",
        "i1@2,i2@4,i2@5",
        &corpus("S1.tfsm"),
    ]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["states"], serde_json::json!(["s0", "s1", "s0", "s0"]));
    assert_eq!(
        v["outputs"],
        serde_json::json!([{"t": "5/1", "outputs": ["o2"]}, {"t": "6/1", "outputs": ["o1", "o3"]}])
    );
    let out = run(&[
        "simulate",
        "--from",
        "s0",
        "--seq",
        "i1@7",
        &corpus("S1.tfsm"),
    ]);
    assert_eq!(out.code, EXIT_ABSENT);
    assert_eq!(json(&out)["defined"], false);
    assert_eq!(
        run(&[
            "simulate",
            "--from",
            "s9",
            "--seq",
            "i1@2",
            &corpus("S1.tfsm")
        ])
        .code,
        EXIT_USAGE
    );
}

#[test]
fn region_json_and_dot() {
    let v = json(&run(&["region", &corpus("S4.tfsm")]));
    assert_eq!(v["machine"], "R(S4)");
    assert_eq!(
        v["inputs"],
        serde_json::json!(["(i1,[0,1))", "(i1,[1,2))", "(i2,[1,3))"])
    );
    assert_eq!(v["transitions"].as_array().unwrap().len(), 12);
    let dot = run(&["region", &corpus("S4.tfsm"), "--dot"]).stdout;
    assert!(dot.contains("\"s2\" -> \"s0\" [label=\"(i1,[1,2))/(o2,4)\"];"));
    let dot = run(&["analyze", "--dot", &corpus("B4.tfsm")]).stdout;
    assert!(dot.contains("[label=\"i1,[1,1]/o1,+3\"]"), "{dot}");
}

#[test]
fn generated_family_parses_back() {
    let out = run(&["gen-bn", "5"]);
    assert_eq!(out.code, EXIT_OK);
    let m = tfsm::format::parse_tfsm(&out.stdout).unwrap();
    assert_eq!(m, tfsm::gen_bn(5).unwrap());
    assert_eq!(run(&["gen-bn", "3"]).code, EXIT_USAGE);
}

#[test]
fn methods_and_oracle_agree_on_s3() {
    let s3 = corpus("S3.tfsm");
    let tree = json(&run(&["derive", "--goal", "hs", "--method", "tree", &s3]));
    let region = json(&run(&["derive", "--goal", "hs", "--method", "region", &s3]));
    let oracle = json(&run(&["oracle", "--goal", "hs", "--max-len", "3", &s3]));
    for v in [&tree, &region, &oracle] {
        assert_eq!(v["exists"], true);
        assert_eq!(v["verified"], true);
        assert_eq!(v["sequence"].as_array().unwrap().len(), 2);
    }
    let ss = run(&["derive", "--goal", "ss", "--method", "tree", &s3]);
    assert_eq!(ss.code, EXIT_ABSENT);
}

#[test]
fn unsupported_classes_name_the_precondition() {
    let out = run(&[
        "derive",
        "--goal",
        "hs",
        "--method",
        "region",
        &corpus("B4.tfsm"),
    ]);
    assert_eq!(out.code, EXIT_UNSUPPORTED);
    assert!(out.stderr.contains("half-open"));
    let out = run(&[
        "derive",
        "--goal",
        "hs",
        "--method",
        "tree",
        &corpus("M1.fsm"),
    ]);
    assert_eq!(out.code, EXIT_UNSUPPORTED);
    let out = run(&[
        "derive",
        "--goal",
        "ss",
        "--method",
        "point",
        &corpus("B4.tfsm"),
    ]);
    assert_eq!(out.code, EXIT_UNSUPPORTED);
    let partial = temp_file(
        "p.tfsm",
        "tfsm P\nstates a b\ninputs i\noutputs o\ntrans a i [1,2) o 1 b\n",
    );
    let out = run(&["derive", "--goal", "hs", "--method", "tree", &partial]);
    assert_eq!(out.code, EXIT_UNSUPPORTED);
    assert!(out.stderr.contains("weakly-complete"), "{}", out.stderr);
}

#[test]
fn parse_errors_carry_positions() {
    let bad = temp_file(
        "bad.tfsm",
        "tfsm B\nstates s0 s1\ninputs i1\noutputs o1\ntrans s0 i1 [3,1) o1 4 s1\n",
    );
    let out = run(&["analyze", &bad]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains(":5:13:"), "{}", out.stderr);
    let out = run(&["analyze", "/nonexistent/x.tfsm"]);
    assert_eq!(out.code, EXIT_USAGE);
    let out = run(&[
        "check",
        "--goal",
        "hs",
        "--seq",
        "i1@2,i1@1",
        &corpus("S1.tfsm"),
    ]);
    assert_eq!(out.code, EXIT_USAGE);
    let out = run(&["check", "--goal", "hs", "--seq", "i1@x", &corpus("S1.tfsm")]);
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn analyze_reports_each_kind() {
    let v = json(&run(&["analyze", &corpus("S1.tfsm")]));
    assert_eq!(v["transitions"], 11);
    assert_eq!(v["weakly_complete"], true);
    assert_eq!(
        v["bounds"][1],
        serde_json::json!({"input": "i2", "lo": 1, "hi": 6})
    );
    let v = json(&run(&["analyze", &corpus("M1.fsm")]));
    assert_eq!(v["kind"], "fsm");
    assert_eq!(v["observable"], false);
    let pfa = temp_file(
        "a.pfa",
        "pfa A\nstates q0 q1\ninputs a b\ntrans q0 a q1\ntrans q1 a q1\n",
    );
    let v = json(&run(&["analyze", &pfa]));
    assert_eq!(v["kind"], "pfa");
    assert_eq!(v["transitions"], 2);
    let empty = temp_file("e.tfsm", "tfsm E\nstates s\n");
    let v = json(&run(&["analyze", &empty]));
    assert_eq!(v["weakly_complete"], true);
}

#[test]
fn help_goes_to_stdout() {
    let out = run(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("derive"));
}
