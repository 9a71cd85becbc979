use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soergel-cli"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).expect("valid json");
    (out.status.code().unwrap(), v)
}

#[test]
fn passing_check_exits_zero() {
    let (code, v) = json(&["walls-check", "--group", "PGL3"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn sl2_separation_fails_at_minus_one() {
    let out = run(&["walls-check", "--group", "SL2"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL"));
    assert!(text.contains("at (-1)"), "{text}");
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["bs-char", "--group", "PGL3", "--word", "1,3"][..],
        &["bs-char", "--group", "PGL3"],
        &["walls-check", "--group", "E9"],
        &["walls-check", "--group", "PGL3", "--wall", "7"],
        &["walls-check", "--field", "F4"],
        &["soergel-basis", "--group", "SL2"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn bs_char_counts_subwords() {
    let (code, v) = json(&["bs-char", "--group", "PGL3", "--word", "1,2,1"]);
    assert_eq!(code, 0);
    let summary = v["checks"][0]["summary"].as_str().unwrap();
    assert!(summary.contains('8'), "{summary}");
}

#[test]
fn reports_are_deterministic() {
    let args = ["bs-decompose", "--group", "PGL3", "--word", "1,2", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.get("timing").is_none());
}

fn cache_files(dir: &Path) -> Vec<std::path::PathBuf> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect()
}

#[test]
fn cache_hits_and_recovers_from_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = [
        "bs-decompose",
        "--group",
        "PGL3",
        "--word",
        "1,2,1",
        "--cache-dir",
        d,
        "--timing",
    ];
    let (code, first) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(first["timing"]["cache"], "miss");
    let files = cache_files(dir.path());
    assert_eq!(files.len(), 1);

    let (_, second) = json(&args);
    assert_eq!(second["timing"]["cache"], "hit");
    assert_eq!(first["checks"], second["checks"]);

    std::fs::write(&files[0], "{ not json").unwrap();
    let (code, third) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(third["timing"]["cache"], "miss");
    assert_eq!(first["checks"], third["checks"]);
    let (_, fourth) = json(&args);
    assert_eq!(fourth["timing"]["cache"], "hit");
}

#[test]
fn split_accepts_a_given_point() {
    let (code, v) = json(&[
        "soergel-split",
        "--group",
        "PGL3",
        "--word",
        "1,2,1",
        "--wall",
        "1",
        "--point",
        "3,9",
    ]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn toml_datum_files_load() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a1.toml");
    std::fs::write(
        &path,
        "name = \"A1\"\ncartan = [[2]]\nlattice = \"adjoint\"\n",
    )
    .unwrap();
    let (code, v) = json(&["datum-info", "--group", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["checks"][0]["detail"]["weyl_order"], 2);
}
