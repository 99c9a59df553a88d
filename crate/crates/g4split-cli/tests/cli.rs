use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn g4split(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g4split")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("g4split-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Runs a command with --json, checks the exit code, then verifies the file.
fn round_trip(name: &str, args: &[&str]) -> Value {
    let path = scratch(name);
    let mut full = args.to_vec();
    full.extend(["--json", path.to_str().unwrap()]);
    let out = g4split(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["run"]["passed"], true);
    let ver = g4split(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(ver.status.code(), Some(0), "{}", String::from_utf8_lossy(&ver.stdout));
    assert_eq!(json_of(&ver)["run"]["passed"], true);
    v
}

#[test]
fn igusa_polar_of_the_worked_pair() {
    let v = round_trip("ig.json", &["igusa", "polar", "--point", "-55,-29,49,36,20,-21", "--sigma", "(0,1,2)"]);
    assert_eq!(v["on_igusa"], true);
    assert_eq!(v["polar_value"], "0");
    assert_ne!(v["reverse_polar_value"], "0");
    let other: Vec<&str> = v["other"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(other, ["-29", "49", "-55", "36", "20", "-21"]);
}

#[test]
fn igusa_off_the_quartic_fails_a_check() {
    let out = g4split(&["igusa", "check-point", "--point", "1,2,3,4,5,-15"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["on_igusa"], false);
}

#[test]
fn kummer_section_has_sixteen_nodes() {
    let out = g4split(&["igusa", "kummer-section", "--point", "-55,-29,49,36,20,-21"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["section"]["distinct_nodes"], 16);
}

#[test]
fn kummer_extract_round_trip() {
    let v = round_trip("ku.json", &["kummer", "extract", "--point", "-55,-29,49,36,20,-21"]);
    assert_eq!(v["branch_sextic"].as_array().unwrap().len(), 7);
    assert!(v["twist"].is_null());
}

#[test]
fn glue_construct_with_auto_sigma() {
    let v = round_trip("gl.json", &["glue", "construct", "--a", "-55,-29,49,36,20,-21", "--b", "auto-sigma", "(0,1,2)"]);
    assert_eq!(v["case"], "D4");
}

#[test]
fn genus4_both_cases() {
    let v = round_trip("d4.json", &["glue", "genus4", "--case", "d4"]);
    assert!(!v["solutions"].as_array().unwrap().is_empty());
    let v = round_trip("v4.json", &["glue", "genus4", "--case", "v4"]);
    assert_eq!(v["f10"].as_array().unwrap().len(), 11);
}

#[test]
fn examples_and_aliases() {
    round_trip("m2.json", &["example", "m2-nonhyp"]);
    let v = round_trip("2dim.json", &["example", "2dim", "--u", "1", "--v", "1"]);
    assert_eq!(v["example"], "2dim");
    let long = g4split(&["squares", "example", "--name", "2dim", "--u", "3", "--v", "-2"]);
    assert_eq!(long.status.code(), Some(0));
}

#[test]
fn family_alias_has_overlap_five() {
    let v = round_trip("fam.json", &["family", "--row", "(3,4,5,6*)", "--u", "2"]);
    assert_eq!(v["overlap"], 5);
}

#[test]
fn octad_complete_worked_pair() {
    let v = round_trip("oc.json", &["octad", "complete", "--p6", "1,2,3,5", "--p7", "2,7,1,3"]);
    let p8: Vec<&str> = v["p8"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(p8, ["561085", "742305", "1272107", "1526855"]);
    assert_eq!(v["genus2"]["pipelines_agree"], true);
}

#[test]
fn octad_special_pair_exits_2() {
    let out = g4split(&["octad", "complete", "--p6", "1,2,3,5", "--p7", "1,3,5,7"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["checks"]["containment"], true);
}

#[test]
fn survey_is_reproducible() {
    let args = ["survey", "--p", "10007", "--n", "30", "--seed", "1", "--samples"];
    let a = round_trip("su.json", &args);
    let b = json_of(&g4split(&args));
    let strip = |mut v: Value| {
        v["run"]["elapsed_ms"] = Value::Null;
        v
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn text_format() {
    let out = g4split(&["--format", "text", "igusa", "check-point", "--point", "-55,-29,49,36,20,-21"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l.starts_with("PASS on_igusa")));
}

#[test]
fn tampered_report_fails_verification() {
    let path = scratch("tamper.json");
    let out = g4split(&["glue", "construct", "--a", "-55,-29,49,36,20,-21", "--b", "auto-sigma", "--sigma", "(0,1,2)"]);
    let mut v = json_of(&out);
    v["mu"]["num"][0] = Value::String("5".into());
    std::fs::write(&path, v.to_string()).unwrap();
    let ver = g4split(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(ver.status.code(), Some(2));
}

#[test]
fn usage_and_precondition_errors_exit_3() {
    assert_eq!(g4split(&["example", "bogus"]).status.code(), Some(3));
    assert_eq!(g4split(&["igusa", "check-point", "--point", "1,2,3"]).status.code(), Some(3));
    assert_eq!(g4split(&["igusa", "check-point", "--point", "1,2,3,4,5,6"]).status.code(), Some(3));
    assert_eq!(g4split(&["octad", "complete", "--p6", "1,2,3,5", "--p7", "1,2,3,5"]).status.code(), Some(3));
    assert_eq!(g4split(&["verify", "--input", "/nonexistent/report.json"]).status.code(), Some(3));
    assert_eq!(g4split(&["--help"]).status.code(), Some(0));
}

#[test]
fn height_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_g4split"))
        .args(["kummer", "extract", "--point", "-55,-29,49,36,20,-21"])
        .env("G4SPLIT_HEIGHT_BOUND", "123456")
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["run"]["config"]["height_bound"], 123456);
}
