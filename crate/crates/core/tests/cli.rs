//! The command-line tool end to end: exit codes, determinism, round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

use koszulkit::cli::{parse_document, read_document, Report};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn kzk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszulkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn doc(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn tot_of_the_typical_cube() {
    let o = kzk(&["tot", "--doc", &doc("typ.kzk")]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("d_1 = 1x2 [x, y]"), "{s}");
    assert!(s.contains("d_2 = 2x1 [-y; x]"), "{s}");
    assert!(s.contains("H_1 = 0") && s.contains("H_2 = 0"), "{s}");
}

#[test]
fn exit_code_pass() {
    for cmd in ["check-koszul", "check-admissible", "tq", "wgp"] {
        assert_eq!(code(&kzk(&[cmd, "--doc", &doc("typ.kzk")])), 0, "{cmd}");
    }
    for args in [
        vec!["snf", "--doc", &doc("arrow.kzk")],
        vec!["homology", "--doc", &doc("arrow.kzk"), "--complex", "six"],
        vec!["zigzag", "--doc", &doc("arrow.kzk")],
    ] {
        assert_eq!(code(&kzk(&args)), 0, "{args:?}");
    }
}

#[test]
fn exit_code_fail() {
    let o = kzk(&["check-koszul", "--doc", &doc("nonmonic.kzk")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("check definition-agreement: pass"), "{}", stdout(&o));
    assert_eq!(code(&kzk(&["check-admissible", "--doc", &doc("nonmonic.kzk")])), 1);
    // 3 -> 6 on Z/2 -> Z/6 is not a quasi-isomorphism
    assert_eq!(code(&kzk(&["homology", "--doc", &doc("arrow.kzk"), "--map", "f"])), 1);
}

#[test]
fn exit_code_usage() {
    assert_eq!(code(&kzk(&["frobnicate"])), 2);
    assert_eq!(code(&kzk(&["tot", "--no-such-flag"])), 2);
    assert_eq!(code(&kzk(&["tot"])), 2);
    assert_eq!(code(&kzk(&["tot", "--doc", &doc("typ.kzk"), "--cube", "absent"])), 2);
    assert_eq!(code(&kzk(&["gb", "--doc", &doc("arrow.kzk")])), 2);
    let bad = tmp("bad.kzk");
    std::fs::write(&bad, "koszulkit 1\nring integers\nmatrix m = 2x2 [1, 2]\n").unwrap();
    let o = kzk(&["snf", "--doc", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn exit_code_inconclusive() {
    let o = kzk(&["check-koszul", "--doc", &doc("steep.kzk"), "--bound", "2"]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
    assert_eq!(code(&kzk(&["check-koszul", "--doc", &doc("steep.kzk")])), 0);
}

#[test]
fn structured_reports_are_reproducible() {
    let args = ["suite", "--seed", "42", "--count", "3", "--format", "structured"];
    let a = kzk(&args);
    let b = kzk(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let r = Report::from_json(&stdout(&a)).unwrap();
    assert_eq!(r.seed, Some(42));
    assert!(r.timings.is_none());
    let c = Command::new(env!("CARGO_BIN_EXE_koszulkit"))
        .args(args)
        .env("KOSZULKIT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn suite_edges() {
    let o = kzk(&["suite", "--count", "0"]);
    assert_eq!(code(&o), 0);
    let o = kzk(&["suite", "--count", "2", "--mutation", "cone-sign-flip"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("check zigzag: fail"), "{}", stdout(&o));
    assert_eq!(code(&kzk(&["suite", "--mutation", "nonsense"])), 2);
}

#[test]
fn suite_budget_is_inconclusive() {
    let o = kzk(&["suite", "--count", "50", "--budget-secs", "0"]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
    assert!(stdout(&o).contains("budget: inconclusive"));
}

#[test]
fn documents_round_trip() {
    for name in ["typ.kzk", "arrow.kzk", "nonmonic.kzk", "steep.kzk"] {
        let d = read_document(&data(name)).unwrap();
        let t = d.to_text();
        let again = parse_document(&t).unwrap();
        assert_eq!(again.to_text(), t, "{name}");
    }
}

#[test]
fn zigzag_reports_verify_and_tampering_is_caught() {
    let out = tmp("zigzag.json");
    let o = kzk(&[
        "zigzag",
        "--doc",
        &doc("arrow.kzk"),
        "--format",
        "structured",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = kzk(&["verify", out.to_str().unwrap()]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));

    let mut r = Report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let cert = r.certificate.as_mut().unwrap();
    let step = &mut cert.steps[0];
    step.comps[0].comps[0] = "1x1 [2]".into();
    let bad = tmp("tampered.json");
    std::fs::write(&bad, r.to_json()).unwrap();
    assert_eq!(code(&kzk(&["verify", bad.to_str().unwrap()])), 1);

    let mut r = Report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    r.certificate.as_mut().unwrap().shift += 1;
    std::fs::write(&bad, r.to_json()).unwrap();
    assert_eq!(code(&kzk(&["verify", bad.to_str().unwrap()])), 1);
}
