//! End-to-end checks of the command-line interface: output shapes, fixture
//! matching, determinism, and exit codes.

use std::io::Write;
use std::process::{Command, Output};

fn gify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_temp(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(content.as_bytes()).expect("write");
    f
}

const SIGN_SCALARS: &str = r#"{
  "field": "R", "dim": 1,
  "basis": [[[1.0]]],
  "H": "cyclic:2",
  "theta": [[[1.0]], [[-1.0]]]
}"#;

#[test]
fn group_report() {
    let out = gify(&["group", "quaternion"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("order: 8"));
    assert!(text.contains("automorphisms: 24"));
    assert!(text.contains("inner automorphisms: 4"));

    let out = gify(&["group", "cyclic:1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("order: 1"));

    let out = gify(&["group", "dihedral:4", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["order"], 8);
    assert_eq!(v["center"].as_array().unwrap().len(), 2);
}

#[test]
fn parse_failures_exit_2() {
    let out = gify(&["group", "simple:60"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pair_classification() {
    let out = gify(&["pair", "cyclic:4", "0,2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("admissible (full automorphism set): true"));

    let out = gify(&["pair", "cyclic:6", "0,3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("admissible (full automorphism set): false"));

    let out = gify(&["pair", "quaternion", "0,1", "--gamma", "inn", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["admissibleGamma"], true);
    assert_eq!(v["balancedGamma"], true);
}

#[test]
fn non_central_subgroup_exits_3() {
    // the reflection subgroup {1, s} of D_4 is not central
    let out = gify(&["pair", "dihedral:4", "0,4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn templates_match_fixtures_byte_for_byte() {
    let cases = [
        (
            vec!["template", "cyclic:4", "0,2"],
            include_str!("../fixtures/templates/z4_z2.txt"),
        ),
        (
            vec!["template", "quaternion", "0,1"],
            include_str!("../fixtures/templates/q8_z2.txt"),
        ),
        (
            vec!["template", "dihedral:4", "0,2"],
            include_str!("../fixtures/templates/d4_z2.txt"),
        ),
        (
            vec!["template", "cyclic:8", "0,4"],
            include_str!("../fixtures/templates/z8_z2.txt"),
        ),
        (
            vec!["template", "cyclic:6", "0,3"],
            include_str!("../fixtures/templates/z6_z2.txt"),
        ),
    ];
    for (args, fixture) in cases {
        let out = gify(&args);
        assert!(out.status.success(), "{args:?}");
        assert_eq!(stdout(&out), fixture, "{args:?}");
        // byte-identical across runs
        assert_eq!(out.stdout, gify(&args).stdout);
    }
}

#[test]
fn template_json_shape() {
    let out = gify(&["template", "cyclic:4", "0,2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["m"], 2);
    assert_eq!(v["grid"][0][1]["coef"], 2);
}

#[test]
fn norm_command() {
    let space = write_temp(SIGN_SCALARS);
    let coeffs = write_temp(r#"{"coeffs": [[[3.0]], [[4.0]]]}"#);
    let out = gify(&[
        "norm",
        "cyclic:4",
        "0,2",
        "--space",
        space.path().to_str().unwrap(),
        "--coeffs",
        coeffs.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!((value - 5.0).abs() < 1e-9);

    // quaternification of (1,1,1,1) has norm 2
    let coeffs = write_temp(r#"{"coeffs": [[[1.0]], [[1.0]], [[1.0]], [[1.0]]]}"#);
    let out = gify(&[
        "norm",
        "quaternion",
        "0,1",
        "--space",
        space.path().to_str().unwrap(),
        "--coeffs",
        coeffs.path().to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(v["method"], "largest singular value");

    // zero coefficients give zero
    let coeffs = write_temp(r#"{"coeffs": [[[0.0]], [[0.0]]]}"#);
    let out = gify(&[
        "norm",
        "cyclic:4",
        "0,2",
        "--space",
        space.path().to_str().unwrap(),
        "--coeffs",
        coeffs.path().to_str().unwrap(),
    ]);
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert_eq!(value, 0.0);
}

#[test]
fn norm_membership_failure_exits_4() {
    // a diagonal-span space over Z_2, with an off-diagonal coefficient
    let space = write_temp(
        r#"{
        "field": "R", "dim": 2,
        "basis": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]],
        "H": "cyclic:2",
        "theta": [[[1.0, 0.0], [0.0, 1.0]], [[-1.0, 0.0], [0.0, -1.0]]]
    }"#,
    );
    let coeffs = write_temp(r#"{"coeffs": [[[0.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}"#);
    let out = gify(&[
        "norm",
        "cyclic:4",
        "0,2",
        "--space",
        space.path().to_str().unwrap(),
        "--coeffs",
        coeffs.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_suites_pass_and_fail_with_exit_codes() {
    let out = gify(&[
        "verify",
        "sum-zero",
        "--group",
        "cyclic:4",
        "--subgroup",
        "0,2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], true);

    // the non-admissible pair fails the vanishing identity: exit 1
    let out = gify(&[
        "verify",
        "sum-zero",
        "--group",
        "cyclic:6",
        "--subgroup",
        "0,3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], false);
    assert!(v["witnesses"]["violatingElement"].is_number());

    let out = gify(&[
        "verify",
        "recovery",
        "--group",
        "quaternion",
        "--subgroup",
        "0,1",
        "--gamma",
        "inn",
        "--samples",
        "10",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let out = gify(&[
        "verify",
        "stages",
        "--group",
        "cyclic:8",
        "--subgroup",
        "0,4",
        "--h2",
        "0,2,4,6",
        "--samples",
        "10",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let out = gify(&[
        "verify",
        "expectation",
        "--group",
        "cyclic:4",
        "--subgroup",
        "0,2",
        "--samples",
        "25",
    ]);
    assert!(out.status.success());

    // unknown suite is a parse error
    let out = gify(&[
        "verify",
        "nonsense",
        "--group",
        "cyclic:4",
        "--subgroup",
        "0,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_with_explicit_space_file() {
    let space = write_temp(SIGN_SCALARS);
    let out = gify(&[
        "verify",
        "algebra",
        "--group",
        "quaternion",
        "--subgroup",
        "0,1",
        "--space",
        space.path().to_str().unwrap(),
        "--samples",
        "20",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn complex_space_file_parses_and_verifies() {
    // fifth roots of unity acting on the complex scalars, entries as [re, im]
    let c = (2.0 * std::f64::consts::PI / 5.0).cos();
    let s = (2.0 * std::f64::consts::PI / 5.0).sin();
    let theta: Vec<String> = (0..5)
        .map(|k| {
            let (re, im) = (
                (k as f64 * (s.atan2(c))).cos(),
                (k as f64 * (s.atan2(c))).sin(),
            );
            format!("[[[{re:.17}, {im:.17}]]]")
        })
        .collect();
    let space = write_temp(&format!(
        r#"{{"field": "C", "dim": 1, "basis": [[[1.0]]], "H": "cyclic:5", "theta": [{}]}}"#,
        theta.join(",")
    ));
    let out = gify(&[
        "verify",
        "fixed-points",
        "--group",
        "cyclic:25",
        "--subgroup",
        "0,5,10,15,20",
        "--space",
        space.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn catalog_output() {
    let out = gify(&["catalog", "--max-order", "9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("groupName,order"));
    assert!(text.contains("Z4,4,\"0,2\",true,true"));
    assert!(text.contains("Z6,6,\"0,3\",true,false"));
    assert!(text.contains("Z9,9,\"0,3,6\",true,true"));
    // deterministic
    assert_eq!(out.stdout, gify(&["catalog", "--max-order", "9"]).stdout);

    let out = gify(&["catalog", "--max-order", "8", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v.as_array().unwrap();
    let q8 = rows
        .iter()
        .find(|r| r["groupName"] == "Q8")
        .expect("Q8 row present");
    assert_eq!(q8["admissibleInn"], true);
    assert_eq!(q8["balancedInn"], true);
    assert_eq!(q8["autOrder"], 24);
}

#[test]
fn catalog_cap_exits_3() {
    let out = gify(&["catalog", "--max-order", "33"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gamma_from_a_permutation_file() {
    // the two automorphisms of Z_4 fixing {0, 2}, given explicitly
    let gamma = write_temp("[[0,1,2,3],[0,3,2,1]]");
    let out = gify(&[
        "verify",
        "sum-zero",
        "--group",
        "cyclic:4",
        "--subgroup",
        "0,2",
        "--gamma",
        gamma.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn automorphism_cap_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_gify"))
        .args(["group", "cyclic:16"])
        .env("GIFY_MAX_GROUP_ORDER", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("GIFY_MAX_GROUP_ORDER"));

    let out = Command::new(env!("CARGO_BIN_EXE_gify"))
        .args(["group", "cyclic:16"])
        .env("GIFY_MAX_GROUP_ORDER", "16")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
}

#[test]
fn seeded_determinism_of_verify() {
    let args = [
        "verify",
        "reasonable",
        "--group",
        "cyclic:4",
        "--subgroup",
        "0,2",
        "--samples",
        "5",
        "--max-level",
        "2",
        "--seed",
        "7",
    ];
    assert_eq!(gify(&args).stdout, gify(&args).stdout);
}
