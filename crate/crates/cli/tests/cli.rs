//! Command-line surface checks: exit codes, output formats, and config
//! loading. (Byte-level determinism of full runs is covered by the
//! acceptance target.)

use std::process::Command;

fn run(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_verify-cli"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn config_errors_exit_with_code_two_and_no_report() {
    // An invalid rank is a configuration error: exit code 2, nothing on
    // stdout.
    let bad = run(&["identities", "--d", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());

    let missing = run(&["all", "--config", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(missing.stdout.is_empty());
}

#[test]
fn text_format_reports_every_check_with_a_verdict() {
    let out = run(&["identities", "--samples", "2", "--d", "1", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).expect("utf-8 report");
    let pass_lines = text.lines().filter(|l| l.starts_with("[PASS]")).count();
    assert!(pass_lines > 0, "expected verdict lines, got:\n{text}");
    assert!(!text.contains("[FAIL]"), "unexpected failure:\n{text}");
    assert!(text.contains("checks:"), "missing summary line:\n{text}");
}

#[test]
fn csv_format_has_a_header_and_one_row_per_check() {
    let out = run(&["identities", "--samples", "2", "--d", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).expect("utf-8 report");
    let mut lines = text.lines();
    let header = lines.next().expect("header row");
    assert!(header.starts_with("suite,name,"));
    assert!(lines.clone().count() > 0);
    // Every data row carries the same number of fields as the header.
    let fields = header.split(',').count();
    for row in lines {
        assert!(row.split(',').count() >= fields, "short row: {row}");
    }
}

#[test]
fn config_file_and_flag_overrides_compose() {
    let dir = std::env::temp_dir().join("verify-cli-test-config");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("small.json");
    std::fs::write(&path, r#"{"samples_per_identity": 2, "d_values": [1]}"#).unwrap();
    let from_file = run(&["identities", "--config", path.to_str().unwrap()]);
    assert!(from_file.status.success());
    // A flag refines the file; the report echoes the effective config.
    let overridden = run(&[
        "identities",
        "--config",
        path.to_str().unwrap(),
        "--samples",
        "3",
    ]);
    assert!(overridden.status.success());
    let text = String::from_utf8(overridden.stdout).unwrap();
    assert!(
        text.contains("\"samples_per_identity\":3"),
        "override not applied:\n{text}"
    );
}
