use std::path::PathBuf;

use proptest::prelude::*;

use super::*;
use crate::cli::wire::{certificate_from_wire, certificate_to_wire, complex_from_wire, complex_to_wire};
use crate::error::Error;

const TYP: &str = include_str!("../../tests/data/typ.kzk");
const ARROW: &str = include_str!("../../tests/data/arrow.kzk");

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn cli(command: &str) -> Cli {
    Cli {
        command: command.into(),
        ..Default::default()
    }
}

#[test]
fn minimal_document() {
    let d = parse_document("koszulkit 1\nring integers\n").unwrap();
    assert!(d.entities.is_empty());
    assert_eq!(d.to_text(), "koszulkit 1\nring integers\n");
}

#[test]
fn canonical_text_is_a_fixed_point() {
    for src in [TYP, ARROW] {
        let a = parse_document(src).unwrap().to_text();
        let b = parse_document(&a).unwrap().to_text();
        assert_eq!(a, b);
    }
}

#[test]
fn errors_carry_positions() {
    match parse_document("koszulkit 1\nring integers\nmatrix m = 2x2 [1, 2; 3]\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    match parse_document("koszulkit 2\nring integers\n") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 11)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn dangling_reference() {
    let src = "koszulkit 1\nring integers\nchainmap f : a -> b\n  at 0 = 1x1 [1]\nend\n";
    assert!(matches!(
        parse_document(src),
        Err(Error::UnresolvedReference(_)) | Err(Error::Parse { .. })
    ));
}

#[test]
fn outcome_precedence() {
    let mut r = Report::new("x", String::new());
    r.check("a", true, "");
    assert_eq!(r.clone().finish().outcome, Outcome::Pass);
    r.push("b", Outcome::Inconclusive, "");
    assert_eq!(r.clone().finish().exit_code(), 3);
    r.check("c", false, "");
    assert_eq!(r.clone().finish().exit_code(), 1);
    r.error = Some("boom".into());
    assert_eq!(r.finish().exit_code(), 2);
}

#[test]
fn report_json_round_trip() {
    let mut c = cli("snf");
    c.doc = Some(data("arrow.kzk"));
    let r = run(&c);
    assert_eq!(r.outcome, Outcome::Pass);
    assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
}

#[test]
fn zigzag_certificate_round_trip() {
    let mut c = cli("zigzag");
    c.doc = Some(data("arrow.kzk"));
    let r = run(&c);
    assert_eq!(r.outcome, Outcome::Pass, "{r:?}");
    let w = r.certificate.clone().unwrap();
    let cert = certificate_from_wire(&crate::arith::Integers, &w).unwrap();
    cert.verify().unwrap();
    assert_eq!(certificate_to_wire(&cert), w);
}

#[test]
fn commands_pass_on_the_typical_cube() {
    for cmd in ["check-koszul", "check-admissible", "tot", "tq", "wgp"] {
        let mut c = cli(cmd);
        c.doc = Some(data("typ.kzk"));
        let r = run(&c);
        assert_eq!(r.outcome, Outcome::Pass, "{cmd}: {r:?}");
    }
}

#[test]
fn usage_errors() {
    assert_eq!(run(&cli("frobnicate")).exit_code(), 2);
    let mut c = cli("tot");
    c.doc = Some(data("nonexistent.kzk"));
    assert_eq!(run(&c).exit_code(), 2);
    let mut c = cli("suite");
    c.mutation = Some("nonsense".into());
    assert_eq!(run(&c).exit_code(), 2);
}

#[test]
fn empty_suite_passes() {
    let mut c = cli("suite");
    c.count = Some(0);
    assert_eq!(run(&c).outcome, Outcome::Pass);
}

#[test]
fn suite_is_deterministic() {
    let mut c = cli("suite");
    c.seed = Some(7);
    c.count = Some(2);
    let a = render(&run(&c), Format::Structured);
    let b = render(&run(&c), Format::Structured);
    assert_eq!(a, b);
}

#[test]
fn mutation_makes_zigzag_fail() {
    let mut c = cli("zigzag");
    c.doc = Some(data("arrow.kzk"));
    c.mutation = Some("mislabel-qis".into());
    assert_eq!(run(&c).outcome, Outcome::Fail);
}

fn matrix_text() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..4, 1usize..4).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-20i64..20, r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrices_survive_reformatting((r, c, v) in matrix_text()) {
        let rows: Vec<String> = v
            .chunks(c)
            .map(|row| row.iter().map(|x| format!(" {x} ")).collect::<Vec<_>>().join(","))
            .collect();
        let src = format!("koszulkit 1\nring integers\nmatrix m = {r}x{c} [{}]\n", rows.join(";"));
        let d = parse_document(&src).unwrap();
        let t = d.to_text();
        prop_assert_eq!(parse_document(&t).unwrap().to_text(), t.clone());
        let m = d.matrix(&crate::arith::Integers, "m").unwrap();
        prop_assert_eq!(m.shape(), (r, c));
    }

    #[test]
    fn complexes_survive_the_wire(seed in any::<u64>()) {
        let z = crate::arith::Integers;
        let x = crate::random::random_complex(&z, &mut crate::random::rng(seed), -1, 3, 3, 1);
        let w = complex_to_wire(&x);
        let y = complex_from_wire(&z, &w).unwrap();
        prop_assert_eq!(complex_to_wire(&y), w);
    }
}
