use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypercusp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercusp")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (serde_json::Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    (serde_json::from_slice(&out.stdout).expect("stdout is JSON"), out.status.code().unwrap())
}

#[test]
fn volume_prints_listing_digits() {
    let out = run(&["volume", &fixture("whitehead.tri")]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().next(), Some("3.66386237670887"));
}

#[test]
fn certify_reports_four_geometric_boxes() {
    let (v, code) = json(&["certify", &fixture("whitehead.tri")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["certificate"]["geometric"], true);
    assert_eq!(v["result"]["certificate"]["boxes"].as_array().unwrap().len(), 4);
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(v.get("timings").is_none());
}

#[test]
fn sweep_writes_monotone_table() {
    let out = scratch("sweep.csv");
    let code = run(&["sweep", &fixture("borromean.tri"), "--cusp", "0", "--family", "1/3..1/20", "--out", out.to_str().unwrap()])
        .status
        .code();
    assert_eq!(code, Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let vols: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(vols.len(), 18);
    assert!(vols.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn output_is_reproducible() {
    let a = run(&["--format", "json", "certify", &fixture("borromean.tri")]);
    let b = run(&["--format", "json", "certify", &fixture("borromean.tri")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["volume", "/definitely/not/here.tri"]).status.code(), Some(3));
    let bad = scratch("bad.tri");
    std::fs::write(&bad, "{\"name\": \"x\"}").unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).status.code(), Some(3));
    // H₁ = Z/5; adding the meridian with framing 0 kills it instead of giving Z
    assert_eq!(run(&["homology", &fixture("lens_5.json"), "--meridian", "0"]).status.code(), Some(1));
}

#[test]
fn homology_of_hopf_surgery() {
    let (v, code) = json(&["homology", &fixture("hopf_link.json"), "--meridian", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["homology_sphere"], true);
    assert_eq!(v["result"]["meridian"]["infinite_cyclic"], true);
}

#[test]
fn fill_whitehead_to_figure_eight_volume() {
    let (v, code) = json(&["--hex-floats", "fill", &fixture("whitehead.tri"), "--slopes", "1/1,inf"]);
    // +1 on one Whitehead component turns the other into the figure-eight knot
    assert_eq!(code, 0);
    let vol = hypercusp::hexfloat::parse(v["result"]["volume"].as_str().unwrap()).unwrap();
    assert!((vol - 2.0298832128193072).abs() < 1e-8);
}

#[test]
fn pd2tri_is_deterministic_and_valid() {
    let (a, b) = (scratch("a.tri"), scratch("b.tri"));
    assert_eq!(run(&["pd2tri", &fixture("figure8.pd"), "--out", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(run(&["pd2tri", &fixture("figure8.pd"), "--out", b.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(run(&["validate", a.to_str().unwrap()]).status.code(), Some(0));
}
