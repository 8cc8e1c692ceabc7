use std::process::{Command, Output};

use serde_json::Value;

fn fgtrop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgtrop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn retraction_congruences_on_boolean() {
    let out = fgtrop(&["verify", "retraction-cong", "--semiring", "fixtures/boolean.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["details"]["congruences"], 2);
}

#[test]
fn retraction_ideals_on_diamond() {
    let out = fgtrop(&["verify", "retraction-ideal", "--semiring", "diamond.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn speck_of_integers() {
    let out = fgtrop(&["speck", "--ring", "Z", "--bound", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], 5);
}

#[test]
fn generic_comparison_has_kernel() {
    let out = fgtrop(&["compare-sheaves", "--ring", "Z", "--opens", "generic"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["details"]["kernel_nontrivial"], true);
}

#[test]
fn projective_line_glues() {
    let out = fgtrop(&["trop", "--gluing", "p1-f2.json", "--covering", "standard"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["covering"], "standard");
    assert_eq!(v["point_count"], 7);
}

#[test]
fn wrong_covering_is_usage_error() {
    let out = fgtrop(&["trop", "--gluing", "p1-f2.json", "--covering", "other"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("standard"));
}

#[test]
fn broken_cocycle_fails() {
    let out = fgtrop(&["trop", "--gluing", "p1-f2-broken.json", "--covering", "broken"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert!(v["error"].as_str().unwrap().contains("cocycle"));
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["verify", "correspondence", "--ring", "Z", "--trials", "20", "--seed", "7"];
    let a = fgtrop(&args);
    let b = fgtrop(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["details"]["seed"], 7);
}

#[test]
fn unknown_ring_is_usage_error() {
    let out = fgtrop(&["speck", "--ring", "W"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn stalks_on_sierpinski_site() {
    let out = fgtrop(&["verify", "stalks", "--site", "sierpinski-z4.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn fixture_dir_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_fgtrop"))
        .args(["verify", "retraction-ideal", "--semiring", "chain3.json"])
        .env("FGTROP_FIXTURES", "/nonexistent")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn radical_of_twelve() {
    let out = fgtrop(&["radical", "--ring", "Z", "--ideal", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ring_radical"], "<6>");
    assert_eq!(v["agree"], true);
}
