use std::process::{Command, Output};

use serde_json::Value;

fn hh2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hh2")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = hh2(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn names(v: &Value) -> Vec<String> {
    v["basis"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap().to_string()).collect()
}

#[test]
fn hh_omega_at_5_lists_thirteen_classes() {
    let v = json(&["hh", "--p", "5", "--coefficient", "omega"]);
    let mut expect: Vec<String> = ["1", "z", "z^2", "z^3", "z^4", "κ", "κz", "κz^2", "κz^3", "c²_1", "c²_2", "c²_3", "c²_4"].map(String::from).to_vec();
    let mut got = names(&v);
    expect.sort();
    got.sort();
    assert_eq!(got, expect);
    assert_eq!(v["p"], 5);
    assert_eq!(v["object"], "HH(Ω,Ω)");
}

#[test]
fn hh_row_counts() {
    assert_eq!(names(&json(&["hh", "--p", "5", "--coefficient", "theta"])).len(), 8);
    let dual = json(&["hh", "--p", "3", "--coefficient", "omega-dual"]);
    let rows = dual["basis"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["h"] == 0));
}

#[test]
fn schema_keys() {
    let v = json(&["spadesuit", "--p", "3", "--a-min", "-1", "--a-max", "1", "--b-min", "-1", "--b-max", "0"]);
    for key in ["p", "object", "basis", "products", "checks"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let row = &v["basis"][0];
    for key in ["name", "a", "b", "i", "j", "k", "h", "idempotent"] {
        assert!(row.get(key).is_some(), "{key}");
    }
    let prod = &v["products"][0];
    assert!(prod["left"].is_string() && prod["right"].is_string());
    assert!(prod["result"][0]["name"].is_string() && prod["result"][0]["coeff"].is_u64());
}

#[test]
fn half_serializes_as_residue() {
    // c²_s · ω_s carries ±½ at p = 5, written as 3 or 2.
    let v = json(&["spadesuit", "--p", "5", "--a-min", "0", "--a-max", "0", "--b-min", "-1", "--b-max", "0"]);
    let mut found = false;
    for prod in v["products"].as_array().unwrap() {
        if prod["left"] == "c²_1@(0,0)" && prod["right"] == "ω_1@(0,-1)" {
            assert_eq!(prod["result"][0]["name"], "ν_1@(0,-1)");
            let c = prod["result"][0]["coeff"].as_u64().unwrap();
            assert!(c == 3 || c == 2);
            found = true;
        }
        for t in prod["result"].as_array().unwrap() {
            assert!(t["coeff"].as_u64().unwrap() < 5);
        }
    }
    assert!(found);
}

#[test]
fn associativity_and_first_principles_flags() {
    let v = json(&["spadesuit", "--p", "3", "--a-min", "-2", "--a-max", "3", "--check-associativity"]);
    let check = &v["checks"][0];
    assert_eq!(check["status"], "PASS");
    assert!(check["name"].as_str().unwrap().starts_with("associativity, triples checked: "));
    let v = json(&["spadesuit", "--p", "5", "--a-min", "0", "--a-max", "0", "--b-min", "0", "--b-max", "0", "--verify-first-principles"]);
    assert_eq!(v["checks"][0]["status"], "PASS");
    assert!(v["checks"][0]["name"].as_str().unwrap().ends_with("mismatches: 0"));
}

#[test]
fn hhl_counts() {
    assert_eq!(names(&json(&["hhl", "--p", "3", "--l", "1", "--k-max", "10"])).len(), 7);
    assert_eq!(names(&json(&["hhl", "--p", "3", "--l", "0"])).len(), 1);
}

#[test]
fn invalid_arguments_exit_2() {
    assert_eq!(hh2(&["spadesuit", "--p", "2"]).status.code(), Some(2));
    assert_eq!(hh2(&["hh", "--p", "9", "--coefficient", "omega"]).status.code(), Some(2));
    assert_eq!(hh2(&["hh", "--p", "3", "--coefficient", "sigma"]).status.code(), Some(2));
    assert_eq!(hh2(&["hhl", "--p", "3", "--l", "1", "--k-min", "4", "--k-max", "2"]).status.code(), Some(2));
    assert_eq!(hh2(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_passes_at_3() {
    let out = hh2(&["verify", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() > 10);
    assert!(checks.iter().all(|c| c["status"] == "PASS"));
}

#[test]
fn output_is_byte_identical() {
    for args in [&["hh", "--p", "5", "--coefficient", "theta-sigma"][..], &["spadesuit", "--p", "3"], &["hhl", "--p", "3", "--l", "2", "--format", "csv"]] {
        assert_eq!(hh2(args).stdout, hh2(args).stdout);
    }
}

#[test]
fn csv_flattens_basis() {
    let out = hh2(&["hh", "--p", "3", "--coefficient", "omega", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,a,b,i,j,k,h,idempotent"));
    assert_eq!(lines.count(), 7);
}
