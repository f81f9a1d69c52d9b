use std::process::Command;

use fqgamma::ffarith::{Fq, LaurentJson, LaurentNum};
use fqgamma_cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, Vec<Value>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fqgamma").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    let lines = String::from_utf8(out).unwrap().lines().filter(|l| l.starts_with('{')).map(|l| serde_json::from_str(l).unwrap()).collect();
    (code, lines)
}

#[test]
fn decide_groups_the_pair() {
    let (code, recs) = call(&["decide", "--q", "3", "--f", "T^2-T", "1/(T^2-T)", "1/T"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(recs[0]["result"]["verdict"], "dependent-pair");
    assert_eq!(recs[0]["q"], 3);
}

#[test]
fn rank_of_the_cautionary_level() {
    let (code, recs) = call(&["rank", "--q", "3", "--f", "T^2-T"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(recs[0]["result"]["rank"], 3);
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["pi", "--x", "1/(T"]).0, EXIT_USAGE);
    assert_eq!(call(&["pi", "--x", "1/T", "--q", "6"]).0, EXIT_USAGE);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
    // -1 is a pole of Pi
    assert_eq!(call(&["pi", "--x", "2", "--prec", "20"]).0, EXIT_DOMAIN);
    assert_eq!(call(&["equiv", "--f", "T^2", "[1/T^2]", "[1/T]"]).0, EXIT_OK);
}

#[test]
fn numbers_round_trip_through_the_wire_format() {
    let (_, recs) = call(&["e", "--x", "(T+1)/T^2", "--prec", "40"]);
    let j: LaurentJson = serde_json::from_value(recs[0]["result"].clone()).unwrap();
    let fq = Fq::new(3).unwrap();
    let x = LaurentNum::from_json(&fq, &j).unwrap();
    assert_eq!(x.to_json(), j);
    assert_eq!(recs[0]["prec"], 40);
}

#[test]
fn output_is_deterministic() {
    let args = ["selftest", "--only", "3", "--seed", "11"];
    let a = call(&args);
    let b = call(&args);
    assert_eq!(a, b);
    assert_eq!(a.1[0]["result"]["passed"], true);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let path = std::env::temp_dir().join(format!("fqgamma-test-{}.conf", std::process::id()));
    std::fs::write(&path, "q=2\nprec=30\n").unwrap();
    let p = path.to_str().unwrap();
    let (_, recs) = call(&["period", "--config", p, "--prec", "24"]);
    assert_eq!((recs[0]["q"].as_u64(), recs[0]["prec"].as_u64()), (Some(2), Some(24)));
    std::fs::write(&path, "q=2\nflavour=30\n").unwrap();
    assert_eq!(call(&["period", "--config", p]).0, EXIT_USAGE);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn verification_commands_report_residuals() {
    let (code, recs) = call(&["coleman-verify", "--f", "T^2", "--x", "1/T^2", "--N", "2", "--prec", "40"]);
    assert_eq!(code, EXIT_OK);
    // 6 units times 3 twists, then the three bracket zeros
    assert_eq!(recs.len(), 6 * 3 + 3);
    assert!(recs.iter().all(|r| r["residual"].as_i64() >= r["tolerance"].as_i64()));
    let (code, recs) = call(&["motive-verify", "--f", "T", "[1/T]", "--trunc-t", "32", "--prec", "60"]);
    assert_eq!(code, EXIT_OK);
    assert!(recs.iter().any(|r| r["inputs"]["entry"] == "coleman-product"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_fqgamma");
    let ok = Command::new(bin).args(["bracket", "--x", "1/T"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let line: Value = serde_json::from_slice(ok.stdout.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_eq!(line["result"], 1);
    let bad = Command::new(bin).args(["bracket"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
