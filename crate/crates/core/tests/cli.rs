use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn rtmpi(args: &[&str]) -> (i32, String) {
    let Output { status, stdout, .. } = Command::new(env!("CARGO_BIN_EXE_rtmpi"))
        .args(args)
        .output()
        .unwrap();
    (status.code().unwrap(), String::from_utf8(stdout).unwrap())
}

#[test]
fn verify_spec_and_mutation() {
    let parity = corpus("parity.rtm");
    assert_eq!(rtmpi(&["verify-spec", &parity]).0, 0);
    let (code, out) = rtmpi(&["verify-spec", "--omit-rule", "0", &parity]);
    assert_eq!(code, 1);
    assert!(out.contains("INEQUIVALENT"));
    let (code, out) = rtmpi(&[
        "verify-spec",
        "--max-states",
        "64",
        &corpus("unbounded.rtm"),
    ]);
    assert_eq!(code, 2);
    assert!(out.contains("INCONCLUSIVE"));
}

#[test]
fn usage_and_parse_errors_exit_64() {
    assert_eq!(rtmpi(&["nonsense"]).0, 64);
    assert_eq!(rtmpi(&["verify-spec"]).0, 64);
    assert_eq!(rtmpi(&["verify-spec", "/nonexistent.rtm"]).0, 64);
    assert_eq!(
        rtmpi(&["check", &corpus("parity.rtm"), &corpus("single.aut")]).0,
        64
    );
    assert_eq!(
        rtmpi(&["verify-spec", "--max-states", "0", &corpus("parity.rtm")]).0,
        64
    );
    assert_eq!(
        rtmpi(&[
            "check",
            "--mode",
            "weak",
            &corpus("single.aut"),
            &corpus("single.aut")
        ])
        .0,
        64
    );
}

#[test]
fn check_identical_files() {
    let f = corpus("cycle3.aut");
    for mode in ["bb", "dpbb"] {
        let (code, out) = rtmpi(&["check", "--mode", mode, &f, &f]);
        assert_eq!(code, 0);
        assert!(out.contains("EQUIVALENT"));
    }
    assert_eq!(rtmpi(&["check", &f, &corpus("single.aut")]).0, 1);
}

#[test]
fn encode_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("rtmpi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pi = dir.join("parity.pi");
    let pi_s = pi.to_string_lossy().into_owned();
    assert_eq!(
        rtmpi(&["encode", "rtm2pi", &corpus("parity.rtm"), "-o", &pi_s]).0,
        0
    );
    let names = std::fs::read_to_string(dir.join("parity.pi.names")).unwrap();
    assert!(names.contains("write = write"));
    let (code, aut) = rtmpi(&["explore", &pi_s]);
    assert_eq!(code, 0);
    assert!(aut.starts_with("des (0,"));
    let (code, text) = rtmpi(&["explore", "--format", "text", "--max-states", "3", &pi_s]);
    assert_eq!(code, 2);
    assert!(text.contains("INCONCLUSIVE"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ts2rtm_and_simulate() {
    let (code, rtm) = rtmpi(&["encode", "ts2rtm", &corpus("single.aut")]);
    assert_eq!(code, 0);
    assert!(rtm.contains("rule: t a 1 / 2 R s"));
    let (code, a) = rtmpi(&[
        "simulate",
        "--seed",
        "9",
        "--steps",
        "15",
        &corpus("nondet.rtm"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        a,
        rtmpi(&[
            "simulate",
            "--seed",
            "9",
            "--steps",
            "15",
            &corpus("nondet.rtm")
        ])
        .1
    );
}

#[test]
fn minimize_and_refute() {
    let (code, out) = rtmpi(&["minimize", "--format", "text", &corpus("cycle3.aut")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("3 states"));
    let (code, out) = rtmpi(&["refute", &corpus("candidates/kresp3.rtm")]);
    assert_eq!(code, 0);
    assert!(out.contains("REFUTED (pigeonhole)"));
}
