use proptest::prelude::*;

use super::*;
use crate::arith::{Integers, MonomialOrder, PolyRing, Rationals};
use crate::fpmodules::power_annihilates;
use crate::random::{random_chain_map, random_complex, random_retraction, rng};

type Q = PolyRing<Rationals>;

fn ring() -> Q {
    PolyRing::new(Rationals, vec!["x".into(), "y".into()], MonomialOrder::GRevLex).unwrap()
}

fn q1() -> Q {
    PolyRing::new(Rationals, vec!["x".into()], MonomialOrder::GRevLex).unwrap()
}

fn mat(r: &Q, rows: usize, cols: usize, s: &[&str]) -> Matrix<Q> {
    Matrix::from_vec(r, rows, cols, s.iter().map(|t| r.parse_elem(t).unwrap()).collect())
}

/// `[A --x--> A]` in degrees 1, 0.
fn mult_x(r: &Q) -> ChainComplex<Q> {
    ChainComplex::from_differentials(r, 0, vec![mat(r, 1, 1, &["x"])]).unwrap()
}

fn koszul_xy(r: &Q) -> ChainComplex<Q> {
    ChainComplex::from_differentials(r, 0, vec![mat(r, 1, 2, &["x", "y"]), mat(r, 2, 1, &["-y", "x"])]).unwrap()
}

#[test]
fn shift_signs() {
    let r = ring();
    let x = mult_x(&r);
    let s = shift(&x, 1);
    assert_eq!(s.support(), Some((-1, 0)));
    assert_eq!(s.d(0), mat(&r, 1, 1, &["-x"]));
    assert_eq!(shift(&x, 0), x);
    assert_eq!(shift(&shift(&x, 1), 1), shift(&x, 2));
    assert_eq!(shift(&shift(&x, 3), -3), x);
}

#[test]
fn brutal_truncations() {
    let r = ring();
    let x = koszul_xy(&r);
    assert_eq!(truncate_brutal(&x, 0, Side::AtLeast), x);
    let top = truncate_brutal(&mult_x(&r), 1, Side::AtLeast);
    assert_eq!(top.support(), Some((1, 1)));
    for k in -1..4 {
        let a = truncate_brutal(&x, k, Side::AtLeast);
        let b = truncate_brutal(&x, k - 1, Side::AtMost);
        assert_eq!(a.total_rank() + b.total_rank(), x.total_rank());
        let (inc, proj) = brutal_sequence(&x, k);
        assert!(inc.is_chain_map() && proj.is_chain_map());
        assert!(proj.compose(&inc).unwrap().is_zero());
        assert!(inc.is_degreewise_split_mono());
    }
}

#[test]
fn good_truncation_as_written() {
    let r = ring();
    let t = truncate_good(&mult_x(&r), 0, Side::AtMost);
    // ker(x) = 0 in degree 1, A in degree 0
    assert!(t.module(&r, 1).is_zero());
    let h0 = t.homology(&r, 0).unwrap();
    assert!(h0.is_visibly_free() && h0.ngens() == 1);
    let x = koszul_xy(&r);
    // below k the homology is untouched
    let t = truncate_good(&x, 2, Side::AtMost);
    for n in 0..2 {
        let a = t.homology(&r, n).unwrap();
        let b = homology(&x, n).unwrap();
        assert_eq!(a.is_zero(), b.is_zero());
    }
    let t = truncate_good(&x, -1, Side::AtLeast);
    assert!(t.homology(&r, 2).unwrap().is_zero());
}

#[test]
fn cone_examples() {
    let r = ring();
    let a = ChainComplex::concentrated(&r, 0, 1);
    let c = cone(&ChainMap::identity(&a)).unwrap();
    assert_eq!(c.support(), Some((0, 1)));
    assert_eq!(c.d(1), mat(&r, 1, 1, &["-1"]));
    assert!(is_acyclic(&c));
    let x = mult_x(&r);
    let f = ChainMap::zero(&x, &ChainComplex::zero(&r));
    let c = cone(&f).unwrap();
    assert_eq!(c, shift(&x, -1));
    assert_eq!(euler_characteristic(&c), -euler_characteristic(&x));
}

#[test]
fn bicomplicial_on_a_point() {
    let r = ring();
    let b = bicomplicial_c(&ChainComplex::concentrated(&r, 0, 1)).unwrap();
    assert_eq!(b.cx.d(1), mat(&r, 1, 1, &["-1"]));
    assert!(b.identities_hold());
    assert!(b.iota_split_injective());
    let z = bicomplicial_c(&ChainComplex::zero(&r)).unwrap();
    assert!(z.identities_hold() && z.cx.is_zero() && z.r.is_zero());
}

#[test]
fn cylinder_on_identity() {
    let r = ring();
    let a = ChainComplex::concentrated(&r, 0, 1);
    let c = cylinder(&ChainMap::identity(&a)).unwrap();
    assert_eq!(c.beta.compose(&c.j2).unwrap(), ChainMap::identity(&a));
    assert!(c.eta.compose(&c.j1).unwrap().is_zero());
    let j2b = c.j2.compose(&c.beta).unwrap();
    assert!(verify_homotopy(&j2b, &ChainMap::identity(&c.cyl), &c.homotopy));
    assert!(c.degreewise_split_exact());
}

#[test]
fn homology_examples() {
    let r = ring();
    let k = koszul_xy(&r);
    let h0 = homology(&k, 0).unwrap();
    let x = r.parse_elem("x").unwrap();
    let y = r.parse_elem("y").unwrap();
    assert_eq!(power_annihilates(&x, &h0, 2).unwrap(), Some(1));
    assert_eq!(power_annihilates(&y, &h0, 2).unwrap(), Some(1));
    assert!(!h0.is_zero());
    assert!(homology(&k, 1).unwrap().is_zero());
    assert!(homology(&k, 2).unwrap().is_zero());
    assert!(is_acyclic(&ChainComplex::<Q>::zero(&r)));
    // [A->A] --(id,0)--> [A->A] ⊕ contractible
    let m = mult_x(&r);
    let (cx, _) = cone_contraction(&ChainComplex::concentrated(&r, 0, 1)).unwrap();
    let big = m.direct_sum(&cx);
    let f = ChainMap::new(m.clone(), big.clone(), |n| {
        Matrix::identity(&r, m.rank(n)).vstack(&Matrix::zeros(&r, cx.rank(n), m.rank(n)))
    })
    .unwrap();
    assert!(is_quasi_iso(&f));
    assert!(!is_quasi_iso(&ChainMap::zero(&m, &m)));
}

#[test]
fn null_homotopy_examples() {
    let r = ring();
    let m = mult_x(&r);
    let h = null_homotopy(&ChainMap::zero(&m, &m)).unwrap();
    assert_eq!(h, Homotopy::zero(&m, &m));
    let (cx, _) = cone_contraction(&ChainComplex::concentrated(&r, 0, 1)).unwrap();
    let id = ChainMap::identity(&cx);
    let h = null_homotopy(&id).unwrap();
    assert!(verify_homotopy(&id, &ChainMap::zero(&cx, &cx), &h));
    assert!(null_homotopy(&ChainMap::identity(&m)).is_none());
}

#[test]
fn retraction_examples() {
    let r = ring();
    let x = mult_x(&r);
    let (cx, _) = cone_contraction(&ChainComplex::concentrated(&r, 0, 1)).unwrap();
    let y = x.direct_sum(&cx);
    let i = ChainMap::new(x.clone(), y.clone(), |n| {
        Matrix::identity(&r, x.rank(n)).vstack(&Matrix::zeros(&r, cx.rank(n), x.rank(n)))
    })
    .unwrap();
    let p = ChainMap::new(y.clone(), x.clone(), |n| {
        Matrix::identity(&r, x.rank(n)).hstack(&Matrix::zeros(&r, x.rank(n), cx.rank(n)))
    })
    .unwrap();
    let s = retraction_splitting(&i, &p).unwrap();
    assert!(s.verify());
    let zero = ChainComplex::zero(&r);
    let i0 = ChainMap::zero(&x, &zero);
    let p0 = ChainMap::zero(&zero, &x);
    assert!(matches!(retraction_splitting(&i0, &p0), Err(Error::Precondition(_))));
}

#[test]
fn cone_sign_mutation_breaks_cones() {
    let r = ring();
    let k = koszul_xy(&r);
    let f = ChainMap::identity(&k);
    assert!(cone(&f).is_ok());
    assert!(with_mutation(Some(Mutation::ConeSignFlip), || cone(&f)).is_err());
    assert!(cone(&f).is_ok());
}

#[test]
fn homotopy_definition_via_c() {
    let r = ring();
    let (cx, _) = cone_contraction(&mult_x(&r)).unwrap();
    let id = ChainMap::identity(&cx);
    let zero = ChainMap::zero(&cx, &cx);
    let h = null_homotopy(&id).unwrap();
    let big = c_homotopy(&id, &zero, &h).unwrap();
    let b = bicomplicial_c(&cx).unwrap();
    assert_eq!(big.compose(&b.iota).unwrap(), id);
    let back = chain_homotopy_from_c(&cx, &big).unwrap();
    assert!(verify_homotopy(&id, &zero, &back));
}

fn arb_poly_complex() -> impl Strategy<Value = ChainComplex<Q>> {
    (any::<u64>(), 0usize..3, 1usize..3).prop_map(|(s, len, rk)| random_complex(&q1(), &mut rng(s), 0, len, rk, 1))
}

fn arb_int_complex() -> impl Strategy<Value = ChainComplex<Integers>> {
    (any::<u64>(), 0usize..3, 1usize..4).prop_map(|(s, len, rk)| random_complex(&Integers, &mut rng(s), 0, len, rk, 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bicomplicial_identities(x in arb_poly_complex()) {
        let b = bicomplicial_c(&x).unwrap();
        prop_assert!(b.identities_hold());
        prop_assert!(b.iota_split_injective());
        let (cx, h) = cone_contraction(&x).unwrap();
        prop_assert!(verify_homotopy(&ChainMap::identity(&cx), &ChainMap::zero(&cx, &cx), &h));
    }

    #[test]
    fn cylinder_structure(x in arb_int_complex(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let y = random_complex(&Integers, &mut g, 0, 2, 2, 0);
        let f = random_chain_map(&x, &y, &mut g, 0);
        let c = cylinder(&f).unwrap();
        prop_assert_eq!(c.beta.compose(&c.j1).unwrap(), f.clone());
        prop_assert!(c.beta.compose(&c.j2).unwrap().is_identity());
        prop_assert!(c.eta.compose(&c.j1).unwrap().is_zero());
        prop_assert!(c.degreewise_split_exact());
        let j2b = c.j2.compose(&c.beta).unwrap();
        prop_assert!(verify_homotopy(&j2b, &ChainMap::identity(&c.cyl), &c.homotopy));
    }

    #[test]
    fn cone_euler_and_square(x in arb_int_complex(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let y = random_complex(&Integers, &mut g, -1, 2, 3, 0);
        let f = random_chain_map(&x, &y, &mut g, 0);
        let c = cone(&f).unwrap();
        prop_assert_eq!(euler_characteristic(&c), euler_characteristic(&y) - euler_characteristic(&x));
        let (inc, proj) = cone_sequence(&f).unwrap();
        prop_assert!(proj.compose(&inc).unwrap().is_zero());
    }

    #[test]
    fn contractible_cones(x in arb_poly_complex()) {
        let c = cone(&ChainMap::identity(&x)).unwrap();
        prop_assert!(null_homotopy(&ChainMap::identity(&c)).is_some());
        prop_assert!(is_acyclic(&c));
        prop_assert_eq!(euler_characteristic(&c), 0);
    }

    #[test]
    fn quasi_isos_compose(x in arb_int_complex(), seed in any::<u64>()) {
        // id + (dH + Hd) is homotopic to the identity, hence a quasi-isomorphism
        let mut g = rng(seed);
        let h1 = crate::random::random_null_homotopic(&x, &x, &mut g, 0);
        let h2 = crate::random::random_null_homotopic(&x, &x, &mut g, 0);
        let f = ChainMap::identity(&x).add(&h1).unwrap();
        let k = ChainMap::identity(&x).add(&h2).unwrap();
        prop_assert!(is_quasi_iso(&f) && is_quasi_iso(&k));
        let fk = f.compose(&k).unwrap();
        prop_assert!(is_quasi_iso(&fk));
        // two out of three with a non-quasi-isomorphism
        let z = ChainMap::zero(&x, &x);
        prop_assert_eq!(is_quasi_iso(&f.compose(&z).unwrap()), is_acyclic(&x));
    }

    #[test]
    fn c_homotopies_match_chain_homotopies(x in arb_int_complex(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let y = random_complex(&Integers, &mut g, 0, 2, 2, 0);
        let f = crate::random::random_null_homotopic(&x, &y, &mut g, 0);
        let zero = ChainMap::zero(&x, &y);
        let h = null_homotopy(&f).unwrap();
        prop_assert!(verify_homotopy(&f, &zero, &h));
        let big = c_homotopy(&f, &zero, &h).unwrap();
        let b = bicomplicial_c(&x).unwrap();
        prop_assert_eq!(big.compose(&b.iota).unwrap(), f.clone());
        let back = chain_homotopy_from_c(&x, &big).unwrap();
        prop_assert!(verify_homotopy(&f, &zero, &back));
    }

    #[test]
    fn retractions_split(seed in any::<u64>()) {
        let (i, p) = random_retraction(&Integers, &mut rng(seed), 2, 2, 0);
        let s = retraction_splitting(&i, &p).unwrap();
        prop_assert!(s.verify());
    }

    #[test]
    fn shift_round_trip(x in arb_int_complex(), k in -3i64..4) {
        prop_assert_eq!(shift(&shift(&x, k), -k), x.clone());
        prop_assert_eq!(euler_characteristic(&shift(&x, k)), if k % 2 == 0 { euler_characteristic(&x) } else { -euler_characteristic(&x) });
    }
}
