use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistlab"))
        .args(args)
        .env_remove("TWISTLAB_VALUATION_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = run(&all);
    let v: Value = serde_json::from_str(&stdout(&o)).expect("json output");
    (code(&o), v)
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&run(&["validate", &fixture("three_chain.json")])), 0);
    let broken = run(&["validate", &fixture("broken_imp.json")]);
    assert_eq!(code(&broken), 1);
    assert!(stdout(&broken).contains("residuation fails at (2, 2, 1)"));
    let poset = run(&["validate", &fixture("not_antisymmetric.json")]);
    assert_eq!(code(&poset), 1);
    assert!(stdout(&poset).contains("antisymmetry"));
    assert_eq!(code(&run(&["validate", &fixture("missing.json")])), 2);
    assert_eq!(code(&run(&["validate", &fixture("malformed.json")])), 2);
    assert_eq!(code(&run(&["validate", &fixture("kleene_twist.json")])), 0);
}

#[test]
fn check_kleene_axioms() {
    let twist = fixture("kleene_twist.json");
    assert_eq!(code(&run(&["check", &twist, "(p & ~p) -> (q | ~q)"])), 0);
    let (c, v) = json(&["check", &twist, "!!(p & ~p) -> (q | ~q)"]);
    assert_eq!(c, 1);
    let r = &v["result"][0];
    assert_eq!(r["result"], "refuted");
    assert_eq!(r["valuation"]["p"], serde_json::json!([1, 1]));
    assert_eq!(r["valuation"]["q"], serde_json::json!([0, 1]));
    assert_eq!(r["value"], serde_json::json!([1, 0]));
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["valuation_cap"], "10000000");

    let (c, v) = json(&["check", &twist]);
    assert_eq!(c, 1);
    assert_eq!(v["result"][0]["result"], "valid");
    assert_eq!(v["result"][1]["result"], "refuted");
}

#[test]
fn check_errors() {
    assert_eq!(code(&run(&["check", &fixture("three_chain.json"), "[]p"])), 2);
    assert_eq!(code(&run(&["check", &fixture("three_chain.json"), "p &"])), 2);
    let capped = Command::new(env!("CARGO_BIN_EXE_twistlab"))
        .args(["check", &fixture("kleene_twist.json"), "p | ~p"])
        .env("TWISTLAB_VALUATION_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(code(&capped), 2);
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap"));
    assert_eq!(
        code(&run(&["--cap", "3", "check", &fixture("kleene_twist.json"), "p | ~p"])),
        2
    );
}

#[test]
fn translations() {
    let o = run(&["translate", "--tb", "(p & ~p) -> (q | ~q)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("[]((([]p) & ([]~p)) -> (([]q) | ([]~q)))"));
    let (c, v) = json(&["translate", "--gt", "p -> q"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["translation"], "[](([]p) -> ([]q))");
    assert_eq!(code(&run(&["translate", "--gt", "~p"])), 2);
}

#[test]
fn grz_search_outcomes() {
    let disjunction = "([](p | q) & ([]p | []<>!p) & ([]q | []<>!q)) -> ([]p | []q)";
    let o = run(&["grz-search", disjunction, "--max-worlds", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("bounded"));
    let (c, v) = json(&["grz-search", "<>[]p -> []<>p", "--max-worlds", "4"]);
    assert_eq!(c, 1);
    let r = &v["result"]["refutation"];
    assert_eq!(r["frame"]["type"], "poset");
    assert!(r["valuation"]["p"].is_array());
    assert!(r["world"].is_u64());
}

#[test]
fn enumerate_counts() {
    let (c, v) = json(&["enumerate", "--type", "poset", "--max-size", "2"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["count"], 3);
    let (_, v) = json(&["enumerate", "--type", "poset", "--max-size", "3", "--labeled"]);
    assert_eq!(v["result"]["count"], 1 + 3 + 19);
    let (_, v) = json(&["enumerate", "--type", "heyting", "--max-size", "3"]);
    assert_eq!(v["result"]["count"], 8);
    assert_eq!(v["result"]["items"][0]["type"], "heyting");
}

#[test]
fn kleene_demo_report() {
    let (c, v) = json(&["kleene-demo"]);
    assert_eq!(c, 0);
    let r = &v["result"];
    assert_eq!(r["kleene"]["result"], "valid");
    assert_eq!(r["kleene_prime"]["result"], "refuted");
    assert_eq!(r["fixed_value"], serde_json::json!([1, 0]));
    assert_eq!(r["scan"]["violations"], serde_json::json!([]));
    assert!(r["transcript"].as_array().unwrap().len() > 3);
}

#[test]
fn companion_from_twist_file_and_flags() {
    assert_eq!(code(&run(&["companion", &fixture("kleene_twist.json")])), 0);
    let (c, v) = json(&[
        "companion",
        &fixture("three_chain.json"),
        "--nabla",
        "1,2",
        "--delta",
        "0",
        "--formula",
        "p | !p",
        "--formula",
        "~~p <-> p",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["delta_closed"], true);
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 2);
    assert_eq!(
        code(&run(&[
            "companion",
            &fixture("three_chain.json"),
            "--nabla",
            "2",
            "--delta",
            "0"
        ])),
        2
    );
}

#[test]
fn relative_base_paths_and_inline_bases() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("three_chain.json"), dir.path().join("a.json")).unwrap();
    let sub = dir.path().join("twists");
    std::fs::create_dir(&sub).unwrap();
    let by_path = sub.join("t.json");
    std::fs::write(
        &by_path,
        r#"{"type":"twist","base":"../a.json","nabla":[1,2],"delta":[0]}"#,
    )
    .unwrap();
    assert_eq!(code(&run(&["validate", by_path.to_str().unwrap()])), 0);
    let inline = sub.join("inline.json");
    std::fs::write(
        &inline,
        r#"{"type":"twist","base":{"type":"poset","size":2,"le":[[0,1]],"closure":true},"nabla":[1,2],"delta":[0,1],
            "formulas":["(p & ~p) -> (q | ~q)"]}"#,
    )
    .unwrap();
    assert_eq!(code(&run(&["check", inline.to_str().unwrap()])), 0);
    let dangling = sub.join("dangling.json");
    std::fs::write(
        &dangling,
        r#"{"type":"twist","base":"nope.json","nabla":[0],"delta":[0]}"#,
    )
    .unwrap();
    assert_eq!(code(&run(&["validate", dangling.to_str().unwrap()])), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "check", &fixture("kleene_twist.json")];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let serial = run(&["--format", "json", "--jobs", "1", "kleene-demo"]);
    let parallel = run(&["--format", "json", "--jobs", "4", "kleene-demo"]);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["config"] = Value::Null;
        v
    };
    assert_eq!(strip(&serial), strip(&parallel));
}
