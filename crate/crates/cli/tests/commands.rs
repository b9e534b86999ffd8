use std::path::Path;
use std::process::Command;

use quiddity::oracle::DEFAULT_BUDGET;
use quiddity_cli::table::{cmd_table, TableKind};

fn golden(kind: TableKind) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{}.csv", kind.name()));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn tables_match_golden_files() {
    for kind in TableKind::ALL {
        let csv = cmd_table(kind, None, DEFAULT_BUDGET).unwrap().to_csv();
        assert_eq!(csv, golden(kind), "{}", kind.name());
    }
}

fn quiddity(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_quiddity"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn count_field(json: &str) -> String {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    v["count"].as_str().unwrap().to_string()
}

#[test]
fn count_command() {
    let (code, out, _) = quiddity(&["count", "--modulus", "8", "--size", "7", "--target", "id"]);
    assert_eq!((code, count_field(&out).as_str()), (0, "5376"));
    let (_, out, _) = quiddity(&[
        "count",
        "--modulus",
        "8",
        "--size",
        "6",
        "--target",
        "id",
        "--constraint",
        "a2-unit",
    ]);
    assert_eq!(count_field(&out), "320");
    let (_, out, err) = quiddity(&[
        "count",
        "--modulus",
        "8",
        "--size",
        "5",
        "--target",
        "id",
        "--constraint",
        "a2=3",
    ]);
    assert_eq!(count_field(&out), "8");
    assert!(err.contains("auto: using dp"));
}

#[test]
fn table_command_is_byte_exact() {
    for kind in TableKind::ALL {
        let (code, out, _) = quiddity(&["table", kind.name(), "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, golden(kind));
    }
}

#[test]
fn exit_codes() {
    let (code, _, err) = quiddity(&[
        "count",
        "--modulus",
        "8",
        "--size",
        "3",
        "--target",
        "1,1,1,1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("determinant"));
    assert_eq!(quiddity(&["table", "nope"]).0, 2);
    assert_eq!(
        quiddity(&[
            "count",
            "--modulus",
            "8",
            "--size",
            "6",
            "--method",
            "formula"
        ])
        .0,
        2
    );
    assert_eq!(
        quiddity(&["verify", "--suite", "bounds", "--m", "3", "--sizes", "7"]).0,
        2
    );
    let (code, out, _) = quiddity(&["verify", "--suite", "bounds", "--m", "3", "--sizes", "6,8"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"passed\":true"));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_quiddity"))
        .args([
            "count",
            "--modulus",
            "8",
            "--size",
            "5",
            "--method",
            "brute",
        ])
        .env("QUIDDITY_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn deterministic_output() {
    let args = ["crt", "--modulus", "24", "--size", "7", "--sign", "minus"];
    assert_eq!(quiddity(&args).1, quiddity(&args).1);
}
