use std::process::{Command, Output};

use shimura_genus1::arith::rat_int;
use shimura_genus1::models::{CurvePoint, EllipticCurve};

fn shimura(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shimura")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn genus_of_a_listed_level() {
    let o = shimura(&["genus", "--D", "10", "--N", "7"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn invalid_level_exits_with_usage_error() {
    let o = shimura(&["genus", "--D", "3", "--N", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid level"));
}

#[test]
fn scan_json_lists_eleven_levels() {
    let o = shimura(&["--format", "json", "scan", "--max-dn", "1000"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 11);
}

#[test]
fn verify_exits_zero() {
    let o = shimura(&["verify", "--scope", "table1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().last().unwrap().ends_with("0 failed"));
}

#[test]
fn fingerprint_of_quartic_and_field_agree() {
    let a = shimura(&["--format", "json", "fingerprint", "--quartic=-27,40,6,-40,-27"]);
    let b = shimura(&["--format", "json", "fingerprint", "--field", r#"{"type":"biquadratic","m":[-14,10]}"#]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn descent_prints_the_quartic() {
    let o = shimura(&["--format", "json", "descent", "--A", "-283", "--B", "-1482", "--d", "-3", "--point", "18,0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d"], "-3/1");
    assert_eq!(v["f"], serde_json::json!(["9216/1", "0/1", "-108/1", "0/1", "1/1"]));
}

#[test]
fn method1_selects_the_class_with_the_target_field() {
    let e = EllipticCurve::new(rat_int(-283), rat_int(-1482)).unwrap().twist(&rat_int(-3));
    let gens = [
        CurvePoint::affine(rat_int(18), rat_int(0)),
        CurvePoint::affine(rat_int(39), rat_int(0)),
        CurvePoint::affine(rat_int(-17), rat_int(280)),
    ];
    let reps: Vec<CurvePoint> = (1..8u32)
        .map(|mask| e.combine(&gens, &[(mask & 1) as i64, (mask >> 1 & 1) as i64, (mask >> 2 & 1) as i64]))
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.json");
    std::fs::write(&path, serde_json::to_string(&reps).unwrap()).unwrap();
    let o = shimura(&[
        "--format",
        "json",
        "method1",
        "--A",
        "-283",
        "--B",
        "-1482",
        "--d",
        "-3",
        "--points",
        path.to_str().unwrap(),
        "--target-field",
        r#"{"type":"biquadratic","m":[-14,10]}"#,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["selected"], 3);
    assert_eq!(v["candidates"][3]["point"], serde_json::json!(["-17/1", "280/1"]));
}

#[test]
fn method2_lists_candidates() {
    let o = shimura(&["--format", "json", "method2", "--Aprime", "-283", "--Bprime", "-1482", "--d", "-3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}
