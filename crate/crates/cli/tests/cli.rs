use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

fn golden(name: &str) -> String {
    fs::read_to_string(fixture(name)).unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confluence"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn mine_square_edges_sorted() {
    let o = run(&[
        "mine",
        "--graph",
        &fixture("square.graph"),
        "--edge-mode",
        "--context",
        &fixture("square.ctx"),
        "--sorted",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), golden("square.mine.tsv"));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn mine_json_lines() {
    let o = run(&[
        "mine",
        "--graph",
        &fixture("square.graph"),
        "--edge-mode",
        "--context",
        &fixture("square.ctx"),
        "--sorted",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("square.mine.jsonl"));
    for line in stdout(&o).lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["v"], 1);
        assert!(v["intent"].is_array() && v["extent"].is_array() && v["anchor_minimal"].is_array());
        assert_eq!(v["empty_support"], false);
    }
}

#[test]
fn parallel_output_is_identical() {
    let base = [
        "mine",
        "--graph",
        &fixture("square.graph"),
        "--edge-mode",
        "--context",
        &fixture("square.ctx"),
    ];
    let seq = run(&base);
    let mut args = base.to_vec();
    args.push("--parallel");
    assert_eq!(stdout(&seq), stdout(&run(&args)));
}

#[test]
fn basis_lines() {
    let o = run(&[
        "basis",
        "--explicit",
        &fixture("square.family"),
        "--context",
        &fixture("square.ctx"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), golden("square.basis"));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn trace_golden() {
    let o = run(&[
        "mine",
        "--explicit",
        &fixture("accessible.family"),
        "--context",
        &fixture("accessible.ctx"),
        "--trace",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("accessible.trace"));
}

#[test]
fn empty_support_needs_flag() {
    let args = [
        "mine",
        "--explicit",
        &fixture("accessible.family"),
        "--context",
        &fixture("accessible.ctx"),
        "--min-support",
        "2",
    ];
    let plain = stdout(&run(&args));
    assert!(!plain.contains("true"));
    let mut with = args.to_vec();
    with.push("--emit-empty-support");
    let flagged = stdout(&run(&with));
    assert_eq!(flagged.lines().count(), plain.lines().count() + 1);
    assert!(flagged.contains("a b c d\t\ta b\ttrue"));
}

#[test]
fn abstraction_file() {
    let o = run(&[
        "mine",
        "--graph",
        &fixture("square.graph"),
        "--edge-mode",
        "--context",
        &fixture("square.ctx"),
        "--abstraction",
        &fixture("square.abs"),
        "--sorted",
        "--emit-empty-support",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let intents: Vec<&str> = out.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(intents, ["a", "a b c d", "b"]);
}

#[test]
fn bad_family_exits_one_with_witness() {
    let o = run(&["check", "--explicit", &fixture("bad.family")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("witness (∅, a b, a c)"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn check_reports_accessibility() {
    let o = run(&["check", "--explicit", &fixture("accessible.family")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("minimals: a b, a c"));
    assert!(stdout(&o).contains("strongly accessible: yes"));
    let o = run(&["check", "--explicit", &fixture("square.family")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("strongly accessible: no"));
}

#[test]
fn check_posets() {
    let o = run(&["check", "--poset", &fixture("diamond.poset")]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check", "--poset", &fixture("bowtie.poset")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no greatest element"));
}

#[test]
fn mining_rejects_inaccessible_family() {
    let o = run(&[
        "mine",
        "--explicit",
        &fixture("square.family"),
        "--context",
        &fixture("square.ctx"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not strongly accessible"));
}

#[test]
fn oracle_report() {
    let o = run(&[
        "oracle",
        "--graph",
        &fixture("square.graph"),
        "--edge-mode",
        "--context",
        &fixture("square.ctx"),
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["v"], 1);
    assert_eq!(v["seed"], 3);
    assert_eq!(v["passed"], true);
    assert_eq!(v["family_size"], 13);
    assert_eq!(v["concepts"].as_array().unwrap().len(), 4);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.graph");
    fs::write(&broken, "v 1\nv 2\ne 1 3\n").unwrap();
    let o = run(&[
        "mine",
        "--graph",
        broken.to_str().unwrap(),
        "--context",
        &fixture("square.ctx"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let missing = dir.path().join("missing.ctx");
    let o = run(&[
        "mine",
        "--kgap",
        "4,1",
        "--context",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["mine", "--kgap", "4", "--context", &fixture("square.ctx")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_context_items_are_invalid() {
    let o = run(&["mine", "--kgap", "5,2", "--context", &fixture("square.ctx")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not in the family"));
}

#[test]
fn kgap_words() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = dir.path().join("words.ctx");
    // positions of a in "abaab", of b in "abaab"
    fs::write(&ctx, "a: 1 3 4\nb: 2 5\n").unwrap();
    let o = run(&[
        "mine",
        "--kgap",
        "5,2",
        "--context",
        ctx.to_str().unwrap(),
        "--sorted",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let intents: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split('\t').next().unwrap().to_string())
        .collect();
    assert_eq!(intents, ["1 3 4", "2", "5"]);
}
