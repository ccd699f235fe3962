use std::process::Command;

use tilehom::scheme::catalog;
use tilehom_cli::{build_report, check_report, list_entries, Report, RunOptions, Verdict};

fn tilehom(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tilehom")).args(args).output().unwrap()
}

#[test]
fn report_round_trips_through_json() {
    let e = catalog::find("ttt").unwrap();
    let opts = RunOptions {
        ring: Some("Z/5".into()),
        ..RunOptions::default()
    };
    let mut report = build_report(&e.scheme, &opts).unwrap();
    report.timings.clear();
    let text = serde_json::to_string(&report).unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}

#[test]
fn check_passes_for_penrose() {
    let e = catalog::find("penrose").unwrap();
    let report = build_report(&e.scheme, &RunOptions::default()).unwrap();
    let check = check_report(&report, e.expected.as_ref().unwrap());
    assert_eq!(check.verdict, Verdict::Pass, "{:?}", check.first_failure);
}

#[test]
fn list_covers_the_catalog() {
    let out = tilehom(&["list", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), list_entries(&catalog::catalog()).len());
}

#[test]
fn exit_codes() {
    assert_eq!(tilehom(&["compute", "ttt", "--check"]).status.code(), Some(0));
    assert_eq!(tilehom(&["compute", "no-such-scheme"]).status.code(), Some(2));
    assert_eq!(tilehom(&["compute", "penrose", "--max-orbits", "3"]).status.code(), Some(3));
    assert_eq!(tilehom(&["compute", "penrose", "--ring", "Z/6"]).status.code(), Some(2));
    assert_eq!(tilehom(&["compute", "ammann-beenker-decorated", "--check"]).status.code(), Some(1));
}

#[test]
fn scheme_files_are_accepted() {
    let dir = std::env::temp_dir().join(format!("tilehom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fibonacci.toml");
    std::fs::write(
        &path,
        r#"
name = "fibonacci"
d = 1
n = 1

[field]
min_poly = [-1, -1, 1]

[lattice]
pi_int = [[[1, 0]], [[0, 1]]]

[[hyperplanes]]
directions = []
offset = [["0", 0]]
"#,
    )
    .unwrap();
    let out = tilehom(&["compute", path.to_str().unwrap(), "--json"]);
    std::fs::remove_dir_all(&dir).ok();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ranks"], serde_json::json!([2, 1]));
}
