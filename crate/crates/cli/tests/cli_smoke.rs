//! End-to-end checks of the binary: exit codes, determinism, file outputs.

use std::process::Command;

fn hforge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hforge"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn spectrum_expect_roundtrip() {
    let (code, stdout, _) = hforge(&["zauner", "spectrum", "--d", "6", "--expect", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"matches_table\": true"));
}

#[test]
fn expect_mismatch_exits_3() {
    let (code, _, stderr) = hforge(&["zauner", "spectrum", "--d", "6", "--expect", "4"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("expect mismatch"));
    assert!(stderr.contains("4.0") && stderr.contains("3.0"), "prints both values: {stderr}");
}

#[test]
fn validation_error_exits_1() {
    let (code, _, _) = hforge(&["mub", "build", "--p", "2"]);
    assert_eq!(code, 1);
    let (code, _, _) = hforge(&["field", "info", "--p", "6"]);
    assert_eq!(code, 1);
}

#[test]
fn guard_exits_2() {
    let (code, _, stderr) = hforge(&["lindep", "search", "--d", "8", "--eigenspace", "Heta2"]);
    assert_eq!(code, 2, "{stderr}");
    let (code, _, _) = hforge(&["cycler", "orbit", "--p", "13"]);
    assert_eq!(code, 2);
}

#[test]
fn identical_config_gives_identical_bytes() {
    let args = ["lindep", "search", "--d", "4", "--eigenspace", "Heta", "--seed", "9"];
    let (c1, out1, _) = hforge(&args);
    let (c2, out2, _) = hforge(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(out1, out2, "byte-identical reruns");
    assert!(out1.contains("\"count\": 116"));
}

#[test]
fn csv_format_and_outputs() {
    let dir = std::env::temp_dir().join("hforge-cli-smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let jsonl = dir.join("sets.jsonl");
    let (code, _, _) = hforge(&[
        "lindep",
        "search",
        "--d",
        "4",
        "--eigenspace",
        "Heta",
        "--seed",
        "9",
        "--sets-out",
        jsonl.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let lines = std::fs::read_to_string(&jsonl).unwrap();
    assert_eq!(lines.lines().count(), 116);
    let (code, stdout, _) = hforge(&["sic", "family", "--theta", "0", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("key,value\r\n"));
    assert!(stdout.contains("dependent_triples,12"));
}

#[test]
fn wigner_files() {
    let dir = std::env::temp_dir().join("hforge-cli-smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("w7.svg");
    let csv = dir.join("w7.csv");
    let (code, stdout, _) = hforge(&[
        "cycler",
        "wigner",
        "--p",
        "7",
        "--svg",
        svg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"sum_is_one\": true"));
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert_eq!(svg_text.matches("<rect").count(), 49);
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(csv_text.lines().count(), 7);
}

#[test]
fn gu_compose_and_embed() {
    let (code, stdout, _) = hforge(&["gu", "compose", "--p", "5", "--g1", "1,2,0,1", "--g2", "2,0,1,3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"relation\": \"equal\""));
    let (code, stdout, _) = hforge(&["gu", "embed", "--p", "7", "--g", "2,1,1,1", "--seed", "3", "--expect", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"simulation_matches\": true"));
}
