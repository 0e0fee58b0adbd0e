use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

const REFERENCE: &str = "# reference system\nvars: x1 x2 x3\nweight: 3 4 7\ng: x1^5 + x2^3 + x3^2 - 1\ng: x1^2 + x2^2 + x3 - 1\ng: x1^6 + x2^5 + x3^3 - 1\n";

fn system(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn globres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_globres")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = globres(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

fn no_numbers(v: &Value) -> bool {
    match v {
        Value::Number(_) => false,
        Value::Array(xs) => xs.iter().all(no_numbers),
        Value::Object(m) => m.values().all(no_numbers),
        _ => true,
    }
}

#[test]
fn reference_residue() {
    let f = system(REFERENCE);
    for method in ["nf", "series", "both"] {
        let (v, code) = json(&["residue", path(&f), "--monomial", "15,15,15", "--method", method]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["residue"], "-258756707658424020014953731203");
    }
}

#[test]
fn reference_root_counts() {
    let f = system(REFERENCE);
    let (v, code) = json(&["count-roots", path(&f)]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["distinct_complex"], "20");
    assert_eq!(v["result"]["distinct_real"], "6");
}

#[test]
fn report_schema() {
    let f = system(REFERENCE);
    let (v, _) = json(&["trace", path(&f), "--poly", "x1^8*x2^2*x3^4"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "system_digest", "result", "timing", "cache"]);
    assert_eq!(v["command"], "trace");
    assert_eq!(v["system_digest"].as_str().unwrap().len(), 64);
    assert_eq!(v["result"]["trace"], "16049138278");
    assert!(no_numbers(&v));
}

#[test]
fn reports_are_deterministic() {
    let f = system(REFERENCE);
    let run = || {
        let (mut v, _) = json(&["dual-matrix", path(&f)]);
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let a = run();
    assert_eq!(a, run());
    assert_eq!(a["result"]["signature"], "0");
    assert_eq!(a["result"]["unit_anti_triangular"], true);
    assert!(no_numbers(&a));
}

#[test]
fn pure_powers_have_unit_residue() {
    let f = system("vars: x1 x2 x3\ng: x1\ng: x2\ng: x3\n");
    let (v, code) = json(&["residue", path(&f), "--monomial", "0,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["residue"], "1");
}

#[test]
fn series_term_counts() {
    let f = system(REFERENCE);
    let (v, code) = json(&["bench-series", path(&f), "--jmax", "30"]);
    assert_eq!(code, 0);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 31);
    let count = |j: usize| rows[j]["terms"].as_str().unwrap().to_owned();
    assert_eq!(
        [2, 5, 10, 15, 20, 25, 30].map(count),
        ["7", "41", "216", "569", "1102", "1803", "2682"].map(String::from)
    );
    assert_eq!(v["timing"]["cumulative_ms"].as_array().unwrap().len(), 31);

    let (v, _) = json(&["bench-series", path(&f), "--jmax", "0"]);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["terms"], "1");
}

#[test]
fn exit_codes() {
    let bad = system("vars: x y\ng: x +* y\ng: y\n");
    let out = globres(&["check", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let arity = system("vars: x y z\ng: x\ng: y\n");
    assert_eq!(globres(&["check", path(&arity)]).status.code(), Some(2));

    let linear = system("vars: x1 x2\ng: x1 + x2\ng: x1 - x2\n");
    let (v, code) = json(&["residue", path(&linear), "--poly", "1"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "basis");

    let (v, code) = json(&["residue", path(&linear), "--poly", "1", "--general"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["residue"], "-1/2");

    assert_eq!(globres(&["check", "/nonexistent/system"]).status.code(), Some(2));
}

#[test]
fn transformed_residues() {
    let swapped = system("vars: x1 x2\ng: x2\ng: x1\n");
    let (v, code) = json(&["transform-residue", path(&swapped), "--poly", "1", "--check-cofactors"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["residue"], "-1");
    assert_eq!(v["result"]["cofactor_identity"], true);

    let linear = system("vars: x1 x2\ng: x1 + x2\ng: x1 - x2\n");
    let (v, _) = json(&["transform-residue", path(&linear), "--poly", "1"]);
    assert_eq!(v["result"]["residue"], "-1/2");
}

#[test]
fn weight_is_discovered_when_absent() {
    let f = system("vars: x1 x2 x3\ng: x1^5 + x2^3 + x3^2 - 1\ng: x1^2 + x2^2 + x3 - 1\ng: x1^6 + x2^5 + x3^3 - 1\n");
    let (v, code) = json(&["check", path(&f)]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["r"], serde_json::json!(["4", "1", "2"]));
    assert_eq!(v["result"]["dim_v"], "30");
}

#[test]
fn cones_and_bounds() {
    let f = system(REFERENCE);
    let (v, _) = json(&["cones", path(&f)]);
    assert_eq!(v["result"]["w_rays"].as_array().unwrap().len(), 4);
    let (v, code) = json(&["bounds", path(&f), "--monomial", "15,15,15", "--weight", "3,4,7"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["total_degree_bound"], "180");
    assert_eq!(v["result"]["s"], "180");
    let (v, _) = json(&["bounds", path(&f), "--monomial", "6,1,1"]);
    assert_eq!(v["result"]["vanishes_by_cone"], true);
    let (_, code) = json(&["bounds", path(&f), "--monomial", "1,1,1", "--weight", "1,1,1"]);
    assert_eq!(code, 2);
}

#[test]
fn chow_and_normal_form() {
    let f = system(REFERENCE);
    let (v, _) = json(&["chow", path(&f), "--degree", "2"]);
    assert_eq!(
        v["result"]["polynomial"],
        "37*u1*u2 - 121*u1*u3 - 5*u2^2 + 81*u2*u3 - 230*u3^2 + 5*u2 - 5*u3 + 1"
    );
    let (v, _) = json(&["normal-form", path(&f), "--poly", "x1^5"]);
    assert_eq!(v["result"]["normal_form"], "x1^2*x2 + x2*x3 - x3^2 - x2 + 1");
    let (v, _) = json(&["residue", path(&f), "--batch", "45", "--method", "both"]);
    let entries = v["result"]["entries"].as_array().unwrap();
    let get = |e: &str| {
        entries
            .iter()
            .find(|x| x["exponent"] == e)
            .map(|x| x["residue"].clone())
    };
    assert_eq!(get("4,1,2"), Some(Value::from("1")));
    assert_eq!(get("6,1,1"), None);
    assert_eq!(v["result"]["nonzero"], entries.len().to_string());
}

#[test]
fn text_output() {
    let f = system(REFERENCE);
    let out = globres(&["degree", path(&f)]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "degree: 0\n");
}

#[test]
fn reproduce_reference() {
    let (v, code) = json(&["reproduce-reference"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["all_passed"], true);
    assert_eq!(v["result"]["checks"].as_array().unwrap().len(), 8);
}
