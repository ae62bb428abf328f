use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn andor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_andor")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = andor(args);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn stdout(args: &[&str]) -> String {
    let out = andor(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (&["poly", "--gate", "or", "--height", "2", "--grid", "4"], "poly_or_h2.json"),
        (&["poly", "--gate", "and", "--height", "2", "--grid", "4", "--emit", "csv"], "poly_and_h2.csv"),
        (&["lemma1", "--height", "2", "--grid", "5", "--emit", "csv"], "lemma1_h2.csv"),
        (&["isets", "--height", "2"], "isets_and_h2.json"),
        (&["prop", "--height", "2"], "prop_and_h2.json"),
        (&["compare", "--height", "2", "--r", "1"], "compare_and_h2_r1.json"),
    ];
    for (args, file) in cases {
        assert_eq!(stdout(args), golden(file), "{args:?} against {file}");
    }
}

#[test]
fn poly_coefficients() {
    let (code, v) = json(&["poly", "--gate", "or", "--height", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["cost"], serde_json::json!(["2/1", "3/1", "-4/1", "1/1"]));
    assert_eq!(v["result"]["prob"], serde_json::json!(["0/1", "0/1", "4/1", "-4/1", "1/1"]));
}

#[test]
fn lemma1_csv_has_999_decreasing_rows() {
    let text = stdout(&["lemma1", "--height", "4", "--emit", "csv"]);
    assert!(text.lines().any(|l| l == "# result.certificate.holds=true"));
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["x", "c_over_p"]);
    let ys: Vec<f64> = rdr.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(ys.len(), 999);
    assert!(ys.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn cep1_example() {
    let (code, v) = json(&["cep1", "--height", "3", "--r", "0.75"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert!((r["argmax"]["z"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert!((r["argmax"]["w"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(r["decreasing_f1"], true);
}

#[test]
fn eigen_is_deterministic_and_records_seeds() {
    let args = ["eigen", "--height", "2", "--r", "0.5", "--seed", "7"];
    let (code, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a["result"]["seeds"][0], 7);
    assert_eq!(a["result"]["certified_iid"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(andor(&["poly", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(andor(&["poly", "--gate", "xor"]).status.code(), Some(2));
    assert_eq!(andor(&["duality", "--grid", "1"]).status.code(), Some(2));
    assert_eq!(andor(&["cep1", "--r", "0"]).status.code(), Some(2));
    assert_eq!(andor(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(andor(&["compare", "--height", "4"]).status.code(), Some(3));
    assert_eq!(andor(&["eigen", "--height", "5"]).status.code(), Some(3));
    assert_eq!(andor(&["prop", "--height", "3", "--grid", "50"]).status.code(), Some(3));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("andor-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("alpha.json");
    let out = andor(&["alpha", "--tol", "1e-8", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let alpha = v["result"]["alpha"].as_f64().unwrap();
    assert!(alpha > 0.5543 && alpha < 0.5546);
    std::fs::remove_dir_all(&dir).unwrap();
}
