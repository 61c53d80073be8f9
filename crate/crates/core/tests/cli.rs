use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn treelogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treelogic")).args(args).env_remove("TREELOGIC_SEED").output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("treelogic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn classify_lists_fragments() {
    let o = treelogic(&["classify", "E (G p)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "PastCTLStar CTLStar PastCTL CTL");
}

#[test]
fn formula_from_file() {
    let path = scratch("phi.txt", "A (p U q)\n");
    let o = treelogic(&["parse", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o), json(&treelogic(&["parse", "A (p U q)"])));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(treelogic(&["parse", "E (p U"]).status.code(), Some(2));
    assert_eq!(treelogic(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(treelogic(&["fuzz", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(treelogic(&["nnf", "--target", "ltl", "p"]).status.code(), Some(2));
}

#[test]
fn compile_then_decompile_then_check() {
    let o = treelogic(&["compile", "E (p U (q & E X r))"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let a = scratch("star.json", &v["automaton"].to_string());
    let r = scratch("star.reg.json", &v["registry"].to_string());
    let (a, r) = (a.to_str().unwrap(), r.to_str().unwrap());

    let c = treelogic(&["check", a, "--registry", r]);
    assert_eq!(c.status.code(), Some(0), "{}", stdout(&c));
    let c = json(&c);
    assert_eq!(c["hesitant"], true);
    assert_eq!(c["polarised"], true);
    assert_eq!(c["certified"], true);

    let d = treelogic(&["decompile", a, "--registry", r]);
    assert_eq!(d.status.code(), Some(0));
    assert_eq!(json(&d)["unverified_visibility"], false);

    let dual = treelogic(&["dual", a, "--registry", r]);
    assert_eq!(dual.status.code(), Some(0));
    assert!(json(&dual)["automaton"].is_object());
}

#[test]
fn two_way_round_trip() {
    let o = treelogic(&["compile", "--two-way", "E Y p | A X E Y q"]);
    assert_eq!(o.status.code(), Some(0));
    let a = scratch("past.json", &json(&o)["automaton"].to_string());
    let d = treelogic(&["decompile", a.to_str().unwrap()]);
    assert_eq!(d.status.code(), Some(0));
    let d = json(&d);
    assert_eq!(d["semantics"], "history-preserving");
    assert!(!d["formula"].as_str().unwrap().is_empty());
}

#[test]
fn mc_with_oracle() {
    let model = r#"{"root":0,"nodes":[{"id":0,"label":["p"],"succ":[1]},{"id":1,"label":["q"],"succ":[1]}]}"#;
    let m = scratch("model.json", model);
    let o = treelogic(&["mc", "E X q & A G E F q", "--model", m.to_str().unwrap(), "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["root"], true);
}

#[test]
fn fuzz_is_seeded() {
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_treelogic"));
        c.args(["fuzz", "--suite", "roundtrip2", "--n", "4", "--samples", "3"]);
        match env {
            Some(s) => c.env("TREELOGIC_SEED", s),
            None => c.env_remove("TREELOGIC_SEED"),
        };
        let o = c.output().unwrap();
        assert_eq!(o.status.code(), Some(0));
        let mut v = json(&o);
        v.as_object_mut().unwrap().remove("wall_ms");
        v
    };
    let a = run(Some("7"));
    assert_eq!(a["seed"], 7);
    assert_eq!(a, run(Some("7")));
    assert_eq!(run(None)["seed"], 0);
}

#[test]
fn fixtures_all_pass() {
    let o = treelogic(&["fixtures"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 7, "{out}");
}
