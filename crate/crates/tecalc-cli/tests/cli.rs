use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn tecalc(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tecalc"))
        .args(args)
        .current_dir(fixtures())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn cases() -> Value {
    serde_json::from_str(&fs::read_to_string(fixtures().join("cases.json")).unwrap()).unwrap()
}

fn args_of(case: &Value) -> Vec<String> {
    case["args"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn golden_reports_are_byte_identical_and_repeatable() {
    for case in cases()["ok"].as_array().unwrap() {
        let args = args_of(case);
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let expected = fs::read(fixtures().join(case["expected"].as_str().unwrap())).unwrap();
        let first = tecalc(&argv, None);
        assert!(
            first.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&first.stderr)
        );
        assert_eq!(first.stdout, expected, "{args:?} differs from its golden report");
        assert_eq!(
            tecalc(&argv, None).stdout,
            first.stdout,
            "{args:?} is not deterministic"
        );
    }
}

#[test]
fn every_error_fixture_yields_its_error_object() {
    for case in cases()["errors"].as_array().unwrap() {
        let args = args_of(case);
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = tecalc(&argv, None);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?} wrote a report");
        let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is one JSON object");
        assert_eq!(err["error"], case["error"], "{args:?}");
        assert!(err["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
}

#[test]
fn failing_verifications_exit_with_three() {
    for case in cases()["failing"].as_array().unwrap() {
        let args = args_of(case);
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = tecalc(&argv, None);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["passed"], Value::Bool(false));
    }
}

#[test]
fn parse_errors_carry_a_location() {
    let out = tecalc(&["decompose", "errors/zero-denominator.json"], None);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["location"], "line 9, column 7");
    assert!(err["message"].as_str().unwrap().contains("zero denominator"));
}

#[test]
fn shipped_presets_match_the_preset_command() {
    for dir in ["presets", "algebras"] {
        for entry in fs::read_dir(fixtures().join(dir)).unwrap() {
            let path = entry.unwrap().path();
            let name = path.file_stem().unwrap().to_str().unwrap().to_string();
            let out = tecalc(&["preset", &name], None);
            assert!(out.status.success());
            assert_eq!(out.stdout, fs::read(&path).unwrap(), "{name}");
        }
    }
}

#[test]
fn piped_preset_decomposes_into_two_blocks() {
    let preset = tecalc(&["preset", "s2"], None).stdout;
    let spec: Value = serde_json::from_slice(&preset).unwrap();
    // oracle: a traceless 2×2 residue has eigenvalues ±sqrt(−det)
    let a0 = &spec["coefficients"][0];
    let entry = |i: usize, j: usize| a0[i][j].as_str().unwrap().parse::<i64>().unwrap();
    assert_eq!(entry(0, 0) + entry(1, 1), 0);
    let minus_det = entry(0, 1) * entry(1, 0) - entry(0, 0) * entry(1, 1);
    let root = (1..=minus_det)
        .find(|r| r * r == minus_det)
        .expect("perfect square");

    let out = tecalc(&["decompose", "--order", "8"], Some(&preset));
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let mut residues: Vec<i64> = report["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| {
            b["connection"]["coefficients"][0][0][0]
                .as_str()
                .unwrap()
                .parse()
                .unwrap()
        })
        .collect();
    residues.sort();
    assert_eq!(residues, vec![-root, root]);
    assert_eq!(report["order"], 8);
}

#[test]
fn s2_rmatrix_table_has_the_expected_magnitudes() {
    let out = tecalc(&["rmatrix", "--preset", "s2", "--order", "3"], None);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let r1: Vec<&str> = report["r"][1]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|row| row.as_array().unwrap().iter().map(|x| x.as_str().unwrap()))
        .collect();
    for v in ["1/16", "-1/16", "1/8", "-1/8"] {
        assert!(r1.contains(&v), "{v} missing from {r1:?}");
    }
}

#[test]
fn matrix_algebra_suite_passes() {
    let out = tecalc(
        &[
            "verify-identities",
            "--algebra",
            "algebras/matrix2.json",
            "--trials",
            "100",
            "--maxlen",
            "4",
        ],
        None,
    );
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], Value::Bool(true));
    for id in report["identities"].as_array().unwrap() {
        assert_eq!(id["failures"], 0, "{}", id["identity"]);
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("tecalc-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let target = dir.join("r.json");
    let target_str = target.to_str().unwrap();
    let to_file = tecalc(
        &["rmatrix", "--preset", "s2", "--order", "3", "--out", target_str],
        None,
    );
    assert!(to_file.status.success() && to_file.stdout.is_empty());
    let to_stdout = tecalc(&["rmatrix", "--preset", "s2", "--order", "3"], None);
    assert_eq!(fs::read(&target).unwrap(), to_stdout.stdout);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn decimal_rendering_is_separate_from_exact_values() {
    let out = tecalc(
        &[
            "rmatrix",
            "--preset",
            "s2",
            "--order",
            "3",
            "--format",
            "exact+decimal",
        ],
        None,
    );
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let exact = tecalc(&["rmatrix", "--preset", "s2", "--order", "3"], None);
    let exact: Value = serde_json::from_slice(&exact.stdout).unwrap();
    assert_eq!(report["exact"], exact);
    assert_eq!(report["decimal_display_only"]["r"][1][0][0], "0.062500000000");
}

#[test]
fn spec_fixtures_round_trip_byte_exact() {
    use tecalc::specfile::{algebra_to_string, connection_to_string, parse_algebra, parse_connection};
    for dir in ["presets", "inputs", "algebras"] {
        for entry in fs::read_dir(fixtures().join(dir)).unwrap() {
            let path = entry.unwrap().path();
            let text = fs::read_to_string(&path).unwrap();
            let back = if dir == "algebras" {
                algebra_to_string(&parse_algebra(&text).unwrap())
            } else {
                connection_to_string(&parse_connection(&text).unwrap())
            };
            assert_eq!(back, text, "{}", path.display());
        }
    }
}
