use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_markov-snake"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn word_outputs() {
    let o = run(&["word", "3/5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "aabaabab / ABABB\n");
    let j = json(&run(&["word", "4/7", "--json"]));
    assert_eq!(j["modified"], "ABABABB");
    assert_eq!(j["word"], "aabaabaabab");
    assert_eq!(j["runs"], serde_json::json!([1, 1, 1]));
}

#[test]
fn poly_methods_agree_and_carry_71() {
    let mut docs = Vec::new();
    for m in ["dp", "enumerate", "mutation"] {
        let o = run(&["poly", "4/7", "--method", m, "--json"]);
        assert!(o.status.success(), "{m}");
        docs.push(json(&o));
    }
    assert_eq!(docs[0], docs[1]);
    assert_eq!(docs[0], docs[2]);
    assert_eq!(docs[0]["deg"], 10);
    let terms = docs[0]["terms"].as_array().unwrap();
    assert!(terms.contains(&serde_json::json!({"i": 4, "j": 2, "k": 4, "c": "71"})));
}

#[test]
fn match_json_shape() {
    let j = json(&run(&["match", "4/7", "--point", "4,2", "--json"]));
    assert_eq!(j["point"], serde_json::json!([4, 2]));
    assert_eq!(j["monomial"], serde_json::json!({"ex": 8, "ey": 4, "ez": 8}));
    assert_eq!(j["edges"].as_array().unwrap().len(), 20);
    assert_eq!(
        j["ops"],
        serde_json::json!(["IPM", "Swap(1)", "Swap(2)", "Swap(3)", "InitialStep(1)", "PullBack", "Twist"])
    );
}

#[test]
fn newton_json_shape() {
    let j = json(&run(&["newton", "3/5", "--json"]));
    assert_eq!(j["vertices"], serde_json::json!([[3, 0], [7, 0], [0, 7], [0, 5]]));
    let diags = j["diagonals"].as_array().unwrap();
    assert_eq!(diags.len(), 5);
    assert_eq!(diags[3]["leftmost"], serde_json::json!([2, 2]));
    assert_eq!(diags[3]["kind"], "Partial");
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "3/5"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("433 perfect matchings"));
    assert!(s.ends_with("PASS\n"));
    let j = json(&run(&["verify", "2/3", "--json", "--cap", "3"]));
    assert_eq!(j["enumeration"], Value::Null);
    assert_eq!(j["pass"], true);
}

#[test]
fn saturate_single_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let o =
        bin().args(["saturate", "--sweep", "--max-sum", "3"]).env("MARKOV_SNAKE_RESULTS", dir.path()).output().unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("1_1.json").exists());
    assert!(dir.path().join("1_2.json").exists());

    let out = dir.path().join("single");
    let o = run(&["saturate", "4/7", "--json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json(&o)["pass"], true);
    assert!(out.join("4_7.json").exists());
}

#[test]
fn renders_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("m.svg");
    let o = run(&["match", "4/7", "--point", "4,2", "--svg", "--out", svg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(doc.matches("edge matched").count(), 20);
    let o = run(&["newton", "4/7", "--point", "4,2", "--tikz"]);
    assert_eq!(stdout(&o).matches(r"\fill[red]").count(), 7);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["word", "2/4"]).status.code(), Some(2));
    assert_eq!(run(&["poly", "4/7", "--method", "magic"]).status.code(), Some(2));
    assert_eq!(run(&["newton", "4/7", "--point", "1,1"]).status.code(), Some(2));
    assert_eq!(run(&["poly", "3/5", "--method", "enumerate", "--cap", "10"]).status.code(), Some(1));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("Usage"));
}
