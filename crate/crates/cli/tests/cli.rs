use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn discrim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discrim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report_json(args: &[&str]) -> Value {
    let out = discrim(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

const ZERO_PLUS: &str = r#"{"dim": 2, "label": "zero_plus", "members": [
    {"prob": 0.5, "vector": [[1, 0], [0, 0]]},
    {"prob": 0.5, "vector": [[0.7071067811865476, 0], [0.7071067811865476, 0]]}]}"#;

const FOUR_STATE: &str = r#"{"dim": 2, "label": "four", "members": [
    {"prob": 0.25, "vector": [[1, 0], [0, 0]]},
    {"prob": 0.25, "vector": [[0.6, 0], [0.8, 0]]},
    {"prob": 0.25, "vector": [[0, 0], [1, 0]]},
    {"prob": 0.25, "vector": [[0.8, 0], [-0.6, 0]]}]}"#;

#[test]
fn report_four_state_generator() {
    let v = report_json(&[
        "report",
        "--family",
        "four_state",
        "--theta",
        "1.0",
        "--q",
        "0.5",
    ]);
    for key in ["entropic", "srm", "pairwise"] {
        assert!((v[key].as_f64().unwrap() - 0.5).abs() <= 1e-9, "{key}");
    }
    assert!(v["oracle_primal"].as_f64().unwrap() <= 0.5 + 1e-9);
    assert!(v["oracle_dual"].as_f64().unwrap() >= 0.5 - 1e-9);
    assert!(v["helstrom"].is_null());
    assert_eq!(v["diagnostics"]["ok"], Value::Bool(true));
    assert!(v["profile"]["cond"].is_number());
}

#[test]
fn report_single_pure_state() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "one.json",
        r#"{"dim": 3, "members": [{"prob": 1.0, "vector": [[0,0],[0,1],[0,0]]}]}"#,
    );
    let v = report_json(&["report", s(&f)]);
    for key in [
        "entropic",
        "pure_state",
        "srm",
        "pairwise",
        "oracle_primal",
        "oracle_dual",
    ] {
        assert!((v[key].as_f64().unwrap() - 1.0).abs() <= 1e-9, "{key}");
    }
}

#[test]
fn report_zero_plus_includes_helstrom() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "zp.json", ZERO_PLUS);
    let v = report_json(&["report", s(&f)]);
    let h = v["helstrom"].as_f64().unwrap();
    assert!((h - 0.5 * (1.0 + 0.5f64.sqrt())).abs() <= 1e-12);
    assert!((h - 0.853553).abs() <= 1e-6);
}

#[test]
fn report_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "zp.json", ZERO_PLUS);
    let a = discrim(&["report", s(&f)]);
    let b = discrim(&["report", s(&f)]);
    assert_eq!(a.stdout, b.stdout);
    let a = discrim(&[
        "report",
        "--family",
        "three_state_replaced",
        "--theta",
        "0.3",
    ]);
    let b = discrim(&[
        "report",
        "--family",
        "three_state_replaced",
        "--theta",
        "0.3",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad_schema = write(
        &dir,
        "s.json",
        r#"{"dim": 2, "members": [{"prob": 1.0, "vector": [[1, 0]]}]}"#,
    );
    let out = discrim(&["report", s(&bad_schema)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("members[0].vector"));

    let unnormalized = write(
        &dir,
        "u.json",
        r#"{"dim": 2, "members": [
        {"prob": 0.5, "vector": [[1, 0], [0, 0]]}, {"prob": 0.4, "vector": [[0, 0], [1, 0]]}]}"#,
    );
    assert_eq!(
        discrim(&["report", s(&unnormalized)]).status.code(),
        Some(3)
    );

    let not_psd = write(
        &dir,
        "p.json",
        r#"{"dim": 2, "members": [
        {"prob": 1.0, "matrix": [[[1.001, 0], [0, 0]], [[0, 0], [-0.001, 0]]]}]}"#,
    );
    assert_eq!(discrim(&["report", s(&not_psd)]).status.code(), Some(3));

    assert_eq!(discrim(&["report"]).status.code(), Some(2));
    assert_eq!(
        discrim(&["report", "--family", "four_state", "--q", "1.5"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn sweep_three_state_five_points() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s.csv");
    let svg = dir.path().join("s.svg");
    let r = discrim(&[
        "sweep",
        "--family",
        "three_state_original",
        "--theta-min",
        "0",
        "--theta-max",
        "1.5707963267948966",
        "--points",
        "5",
        "--out",
        s(&out),
        "--svg",
        s(&svg),
    ]);
    assert_eq!(r.status.code(), Some(0));
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["theta", "entropic", "srm", "pairwise"]);
    assert_eq!(rows.len(), 5);
    for row in &rows {
        assert!(row[2] >= row[3] - 1e-9);
    }
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
}

#[test]
fn sweep_four_state_is_flat() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("f.csv");
    let r = discrim(&[
        "sweep",
        "--family",
        "four_state",
        "--q",
        "0.5",
        "--theta-min",
        "-1",
        "--theta-max",
        "7",
        "--points",
        "9",
        "--bounds",
        "entropic,srm,pairwise,oracle",
        "--out",
        s(&out),
    ]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let (header, rows) = read_csv(&out);
    assert_eq!(
        header,
        [
            "theta",
            "entropic",
            "srm",
            "pairwise",
            "oracle_primal",
            "oracle_dual"
        ]
    );
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0][0], -1.0);
    assert_eq!(rows[8][0], 7.0);
    for row in &rows {
        for v in &row[1..] {
            assert!((v - 0.5).abs() <= 1e-9);
        }
    }
}

#[test]
fn sweep_oracle_dominates_row_wise() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o.csv");
    let r = discrim(&[
        "sweep",
        "--family",
        "three_state_replaced",
        "--points",
        "12",
        "--bounds",
        "oracle,entropic,srm,pairwise",
        "--sequential",
        "--out",
        s(&out),
    ]);
    assert_eq!(r.status.code(), Some(0));
    let (header, rows) = read_csv(&out);
    let dual = header.iter().position(|h| h == "oracle_dual").unwrap() - 1;
    for row in &rows {
        for (i, v) in row[1..].iter().enumerate() {
            assert!(*v <= row[1 + dual] + 1e-6, "column {i}");
            assert!((0.0..=1.0 + 1e-9).contains(v));
        }
    }
}

#[test]
fn sweep_two_points_and_file_family() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "zp.json", ZERO_PLUS);
    let out = dir.path().join("two.csv");
    let r = discrim(&[
        "sweep",
        s(&f),
        "--family",
        "file",
        "--points",
        "2",
        "--bounds",
        "helstrom,srm",
        "--out",
        s(&out),
    ]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let (_, rows) = read_csv(&out);
    assert_eq!(rows.len(), 2);
    assert!((rows[0][1] - 0.8535533905932737).abs() < 1e-12);
}

#[test]
fn sweep_error_codes() {
    let dir = TempDir::new().unwrap();
    let unwritable = dir.path().join("missing").join("x.csv");
    assert_eq!(
        discrim(&["sweep", "--points", "3", "--out", s(&unwritable)])
            .status
            .code(),
        Some(4)
    );
    let out = dir.path().join("x.csv");
    assert_eq!(
        discrim(&["sweep", "--points", "1", "--out", s(&out)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        discrim(&["sweep", "--bounds", "bogus", "--out", s(&out)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn validate_accepts_valid_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "four.json", FOUR_STATE);
    let out = discrim(&["validate", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l == "OK"));
    assert!(text.contains("member 3:"));
}

#[test]
fn validate_reports_probability_sum() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "p.json",
        r#"{"dim": 2, "members": [
        {"prob": 0.5, "vector": [[1, 0], [0, 0]]}, {"prob": 0.4, "vector": [[0, 0], [1, 0]]}]}"#,
    );
    let out = discrim(&["validate", s(&f)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("probability sum is 0.9"));
}

#[test]
fn validate_reports_psd_violation() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "n.json",
        r#"{"dim": 2, "members": [
        {"prob": 1.0, "matrix": [[[1.001, 0], [0, 0]], [[0, 0], [-0.001, 0]]]}]}"#,
    );
    let out = discrim(&["validate", s(&f)]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("member 0: not positive semidefinite"));
    assert!(text.contains("min_eigenvalue=-1.000000e-3"));
}
