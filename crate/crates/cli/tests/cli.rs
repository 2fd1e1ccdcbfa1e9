use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hopf-serre"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn build_then_verify() {
    let p = tmp("taft3.json");
    let o = run(&["build", "taft", "--N", "3", "--out", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("all axioms hold"));
}

#[test]
fn comodule_file_verifies() {
    let p = tmp("l1.json");
    let o = run(&["build", "taft", "--N", "3", "--family", "L1", "--params", "d=3,xi=1", "--out", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = run(&["verify", "--json", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["kind"], "comodule algebra");
}

#[test]
fn trivial_comodule_algebra() {
    let p = tmp("trivial.json");
    assert_eq!(code(&run(&["build", "taft", "--N", "3", "--family", "k", "--out", p.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["verify", p.to_str().unwrap()])), 0);
}

#[test]
fn corrupted_antipode_is_an_axiom_failure() {
    let o = run(&["build", "taft", "--N", "3"]);
    let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // S = identity
    let id: Vec<serde_json::Value> = (0..9).map(|i| serde_json::json!([i, i, "1"])).collect();
    v["antipode"] = serde_json::Value::Array(id);
    let p = tmp("bad_antipode.json");
    std::fs::write(&p, serde_json::to_string(&v).unwrap()).unwrap();
    let o = run(&["verify", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL") && stdout(&o).contains("antipode"), "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_3() {
    let p = tmp("garbage.json");
    std::fs::write(&p, "{\"format\": \"scf-1\", \"conductor\": 3").unwrap();
    assert_eq!(code(&run(&["verify", p.to_str().unwrap()])), 3);
    assert_eq!(code(&run(&["verify", tmp("missing.json").to_str().unwrap()])), 3);
    assert_eq!(code(&run(&["table", "taft", "--N", "3", "--family", "L9"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
}

#[test]
fn taft_table_reports_the_mismatch() {
    let o = run(&["table", "taft", "--N", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("1 mismatches"));
    let o = run(&["table", "taft", "--N", "3", "--family", "L1"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn book_table_matches() {
    let o = run(&["table", "book", "--N", "3", "--parallel"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("66 cells, 0 mismatches"));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["table", "taft", "--N", "3", "--family", "L1", "--format", "json"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["mismatches"], 0);
    let a = stdout(&run(&["build", "book", "--N", "2"]));
    assert_eq!(a, stdout(&run(&["build", "book", "--N", "2"])));
}

#[test]
fn serre_with_trivial_x_is_the_identity() {
    let o = run(&["serre", "--ambient", "taft", "--N", "3", "--family", "L1", "--params", "d=1,xi=1", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m = v["matrix"].as_array().unwrap();
    for (i, row) in m.iter().enumerate() {
        for (j, c) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(c.as_str().unwrap(), if i == j { "1" } else { "0" });
        }
    }
    assert_eq!(v["invertible"], true);
    assert_eq!(v["residual_nonzero"], 0);
}

#[test]
fn serre_from_file_with_a_character() {
    let p = tmp("l1b.json");
    assert_eq!(code(&run(&["build", "taft", "--N", "3", "--family", "L1", "--params", "d=3", "--out", p.to_str().unwrap()])), 0);
    let o = run(&["serre", p.to_str().unwrap(), "--x", "chi1"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("general - simple: 0 nonzero entries"));
}
