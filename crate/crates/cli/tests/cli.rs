use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetablocks"))
        .current_dir(root())
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn c2_table_is_two_by_two() {
    let v = json(&["--json", "table", "testdata/c2.json"]);
    let chars = v["chars"].as_array().unwrap();
    assert_eq!(chars.len(), 2);
    assert!(chars.iter().all(|r| r.as_array().unwrap().len() == 2));
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);

    let text = run(&["table", "testdata/c2.json"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.lines().any(|l| l.split_whitespace().eq(["X.1", "1", "-1"])));
}

#[test]
fn a4_has_one_two_block_with_klein_defect() {
    let v = json(&["--json", "blocks", "-p", "2", "testdata/a4.json"]);
    let blocks = v["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0]["defect"], 2);
    assert_eq!(blocks[0]["defect_group"].as_array().unwrap().len(), 4);
}

#[test]
fn corpus_verifies() {
    let out = run(&["verify", "--corpus", "testdata/corpus.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8(out.stdout).unwrap().contains(" 0 fail"));
}

#[test]
fn single_check_filter() {
    let v = json(&["--json", "verify", "--corpus", "testdata/corpus.json", "--theorem", "containment"]);
    let outcomes = v["outcomes"].as_array().unwrap();
    assert!(!outcomes.is_empty());
    assert!(outcomes.iter().all(|o| o["check"] == "containment"));
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["--json", "table", "auto:SL23"][..],
        &["--json", "modtable", "-p", "3", "auto:S4"],
        &["--json", "decomp", "-p", "2", "auto:A5"],
        &["--json", "theta", "-p", "2", "--normal", "auto:center", "--theta", "1", "auto:Q8"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn theta_blocks_of_s4_over_a4() {
    let v = json(&["--json", "theta", "-p", "2", "--normal", "auto:derived", "--theta", "3", "auto:S4"]);
    let blocks = v["theta_blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0]["rows"], serde_json::json!([3, 4]));
    assert_eq!(blocks[0]["defect_quotient_order"], 2);
}

#[test]
fn bad_input_exits_with_two() {
    let dir = std::env::temp_dir().join(format!("thetablocks-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"name":"x","permutations":[[0,0]]}"#).unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["table".into(), bad.display().to_string()],
        vec!["table".into(), dir.join("missing.json").display().to_string()],
        vec!["table".into(), "auto:NOPE".into()],
        vec!["theta".into(), "-p".into(), "2".into(), "--normal".into(), "1,2".into(), "--theta".into(), "0".into(), "auto:S3".into()],
        vec!["--ideal-choice".into(), "9,9".into(), "blocks".into(), "-p".into(), "2".into(), "auto:A4".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
    std::fs::remove_dir_all(&dir).ok();
}
