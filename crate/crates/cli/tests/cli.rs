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
    Command::new(env!("CARGO_BIN_EXE_lablogic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    (code(&out), serde_json::from_slice(&out.stdout).expect("JSON on stdout"))
}

#[test]
fn parse_prints_canonical_form() {
    let out = run(&["parse", "((p & q)) -> ~ ~r"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "p & q -> ~~r\n");
    let (c, v) = json(&["parse", "p | q"]);
    assert_eq!(c, 0);
    assert_eq!(v["atoms"], serde_json::json!(["p", "q"]));
}

#[test]
fn parse_error_is_an_input_error() {
    let out = run(&["parse", "p &"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["entails"])), 2);
}

#[test]
fn eval_in_model_and_under_assignment() {
    let model = data("contraposition.model");
    let (c, v) = json(&["eval", "A -> B", "--model", &model]);
    assert_eq!(c, 0);
    assert_eq!(v["values"]["u"], "T");
    let out = run(&["eval", "~B -> ~A", "--model", &model, "--state", "u"]);
    assert_eq!(stdout(&out), "u: N\n");
    let out = run(&["eval", "p & ~q", "--assign", "p=T,q=TF"]);
    assert_eq!(stdout(&out), "TF\n");
}

#[test]
fn check_frame_reports_violations() {
    let model = data("contraposition.model");
    let out = run(&["check-frame", &model]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "all conditions satisfied\n");
    let (c, v) = json(&["check-frame", &model, "--conditions", "vi,vii,viii,ix,x"]);
    assert_eq!(c, 1);
    let failed: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["condition"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["ix", "x"]);
}

#[test]
fn repaired_frame_passes_every_condition() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("contraposition.model")).unwrap();
    let mut m: Value = serde_json::from_str(&text).unwrap();
    m["R1"].as_array_mut().unwrap().push(serde_json::json!(["y", "x", "x"]));
    let path = dir.path().join("repaired.model");
    std::fs::write(&path, m.to_string()).unwrap();
    let path = path.display().to_string();
    let out = run(&["check-frame", &path, "--conditions", "vi,vii,viii,ix,x"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(code(&run(&["check-model", &path, "--conditions", "all"])), 0);
}

#[test]
fn entailment_and_model_consequence() {
    assert_eq!(code(&run(&["entails", "--premise", "p & q", "--conclusion", "q | r"])), 0);
    let out = run(&["entails", "--premise", "p", "--conclusion", "q | ~q"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("fails: "));
    let model = data("contraposition.model");
    let args = ["entails", "--model", &model, "--conclusion", "(A -> B) -> (~B -> ~A)"];
    assert_eq!(code(&run(&args)), 1);
    let args = ["entails", "--model", &model, "--premise", "A -> B", "--conclusion", "A -> B"];
    assert_eq!(code(&run(&args)), 0);
}

#[test]
fn proof_checking() {
    let out = run(&["prove-check", &data("prefixing_chain.proof")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "accepted: A & B -> A | C\n");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.proof");
    std::fs::write(&path, "1. A -> A | B ; AXIOM A2\n2. A | B ; RULE R1 FROM 1,1\n").unwrap();
    let (c, v) = json(&["prove-check", path.to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(v["accepted"], false);
    assert_eq!(v["line"], 2);
}

#[test]
fn countermodel_for_contraposed_negation() {
    let args = ["countermodel", "--premise", "A -> ~B", "--conclusion", "B -> ~A", "--max-states", "3"];
    let out = run(&args);
    assert_eq!(code(&out), 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("found.model");
    std::fs::write(&path, &out.stdout).unwrap();
    let path = path.display().to_string();
    assert_eq!(code(&run(&["entails", "--model", &path, "--conclusion", "A -> ~B"])), 0);
    assert_eq!(code(&run(&["entails", "--model", &path, "--conclusion", "B -> ~A"])), 1);

    let out = run(&["countermodel", "--conclusion", "p -> p"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn probability_tables() {
    assert_eq!(code(&run(&["prob-validate", &data("table.json")])), 0);
    let (c, v) = json(&["prob-validate", &data("bad_table.json")]);
    assert_eq!(c, 1);
    assert_eq!(v["violations"][0]["axiom"], "ii");
    let zeros = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(zeros.path(), r#"{"p": "0", "q": "0"}"#).unwrap();
    let zeros = zeros.path().to_str().unwrap();
    assert_eq!(code(&run(&["prob-validate", zeros])), 0);
    assert_eq!(code(&run(&["prob-validate", zeros, "--non-trivial"])), 1);
}

#[test]
fn total_probability() {
    let dist = data("weather.dist");
    let (c, v) = json(&["ttp", &dist, "--target", "p", "--cell", "q", "--cell", "~q"]);
    assert_eq!(c, 1);
    assert_eq!(v["partition"], false);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("classical.dist");
    std::fs::write(
        &path,
        r#"{"atoms": ["p", "q"], "masses": [
            {"assignment": {"p": "T", "q": "T"}, "mass": "1/3"},
            {"assignment": {"p": "F", "q": "T"}, "mass": "1/6"},
            {"assignment": {"p": "TF", "q": "F"}, "mass": "1/2"}]}"#,
    )
    .unwrap();
    let (c, v) = json(&["ttp", path.to_str().unwrap(), "--target", "p", "--cell", "q", "--cell", "~q"]);
    assert_eq!(c, 0);
    assert_eq!(v["lhs"], "5/6");
    assert_eq!(v["rhs"], "5/6");
}

#[test]
fn dutch_books() {
    let out = run(&["dutch-book", &data("quotes.json")]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.starts_with("violation of axiom iii"), "{text}");
    assert!(text.contains("stake S = -1"));
    assert!(text.contains("best net gain -1/10"));

    let (c, v) = json(&["dutch-book", &data("quotes.json"), "--stake", "10"]);
    assert_eq!(c, 1);
    assert_eq!(v["violation"]["axiom"], "iii");
    assert_eq!(v["max_gain"], "-1");
    assert_eq!(v["sure_loss"], true);

    assert_eq!(code(&run(&["dutch-book", &data("coherent_quotes.json")])), 0);
    let (c, v) = json(&["dutch-book", &data("bets.json")]);
    assert_eq!(c, 1);
    assert_eq!(v["max_gain"], "-1/10");
}

#[test]
fn updating_from_scenarios() {
    let (c, v) = json(&["update", &data("bayes.scenario")]);
    assert_eq!(c, 0);
    assert_eq!(v["values"]["p"], "2/3");
    assert_eq!(v["values"]["q"], "1");
    assert_eq!(v["characterization"], true);
    assert!(v["distribution"]["masses"].is_array());

    let (c, v) = json(&["update", &data("jeffrey.scenario")]);
    assert_eq!(c, 0);
    assert_eq!(v["values"]["p"], "1/2");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.scenario");
    std::fs::write(
        &path,
        r#"{"rule": "bayes",
            "distributions": {"p": {"atoms": ["p"], "masses": [{"assignment": {"p": "N"}, "mass": "1"}]}},
            "formulas": {"b": "p"}}"#,
    )
    .unwrap();
    assert_eq!(code(&run(&["update", path.to_str().unwrap()])), 2);
}

#[test]
fn simulation() {
    let out = run(&["simulate", "--trials", &data("small.trials"), "--formula", "p", "--formula", "p & ~p"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "n = 5\np: freq 3, rfreq 3/5\np & ~p: freq 1, rfreq 1/5\n");

    let model = data("contraposition.model");
    let (c, v) = json(&["simulate", "--model", &model, "--state", "u", "--formula", "A -> B"]);
    assert_eq!(c, 0);
    assert_eq!(v["values"]["A -> B"], "1");
    let args = ["simulate", "--model", &model, "--state", "u", "--formula", "~(A -> B)", "--mode", "conjunctive"];
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(code(&run(&["simulate", "--formula", "p"])), 2);
}

#[test]
fn output_is_deterministic() {
    let dist = data("weather.dist");
    let args = ["simulate", "--distribution", &dist, "--n", "200", "--seed", "11", "--formula", "p", "--emit-trials"];
    let first = run(&args);
    assert_eq!(first.stdout, run(&args).stdout);
    let other = ["simulate", "--distribution", &dist, "--n", "200", "--seed", "12", "--formula", "p", "--emit-trials"];
    assert_ne!(first.stdout, run(&other).stdout);

    let args = ["--json", "countermodel", "--premise", "p -> q", "--conclusion", "~q -> ~p"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
