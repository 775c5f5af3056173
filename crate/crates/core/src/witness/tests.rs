use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use super::*;
use crate::arith::{smith_normal_form, Integers, MonomialOrder, PolyRing, Rationals};
use crate::complexes::{cone, euler_characteristic, with_mutation};
use crate::random::{random_chain_map, random_complex, rng};

type Z = Integers;

fn z() -> Z {
    Integers
}

fn zm(rows: usize, cols: usize, v: &[i64]) -> Matrix<Z> {
    Matrix::from_vec(&z(), rows, cols, v.iter().map(|&a| BigInt::from(a)).collect())
}

/// `[Z --n--> Z]` in inner degrees 1, 0.
fn mult(n: i64) -> ChainComplex<Z> {
    ChainComplex::from_differentials(&z(), 0, vec![zm(1, 1, &[n])]).unwrap()
}

fn arrow(f: &ChainMap<Z>, low: i64) -> DoubleComplex<Z> {
    DoubleComplex::new(&z(), low, vec![f.cod.clone(), f.dom.clone()], vec![f.clone()]).unwrap()
}

/// Free rank and nontrivial invariant factors of `H_n`, from Smith forms of
/// the two differentials.
fn z_homology(x: &ChainComplex<Z>, n: i64) -> (usize, Vec<BigInt>) {
    let rank = |m: &Matrix<Z>| {
        if m.rows() == 0 || m.cols() == 0 {
            return (0, vec![]);
        }
        let f = smith_normal_form(m).unwrap().invariant_factors();
        (f.len(), f)
    };
    let (r_out, _) = rank(&x.d(n));
    let (r_in, fs) = rank(&x.d(n + 1));
    let torsion = fs.into_iter().map(|a| a.abs()).filter(|a| *a != BigInt::from(1)).collect();
    (x.rank(n) - r_out - r_in, torsion)
}

fn same_homology(a: &ChainComplex<Z>, b: &ChainComplex<Z>) -> bool {
    let lo = a.low().min(b.low()) - 1;
    let hi = a.high().max(b.high()) + 1;
    (lo..=hi).all(|n| z_homology(a, n) == z_homology(b, n))
}

#[test]
fn total_complex_of_an_arrow_is_the_cone() {
    let x = mult(2);
    let y = mult(6);
    let f = ChainMap::new(x.clone(), y.clone(), |n| zm(1, 1, &[if n == 1 { 1 } else { 3 }])).unwrap();
    assert_eq!(tot_outer(&arrow(&f, 0)), cone(&f).unwrap());
    assert_eq!(tot_outer(&DoubleComplex::embed(&x)), x);
    let bad = ChainMap::unchecked(x.clone(), y, |_| zm(1, 1, &[3])).unwrap();
    assert!(DoubleComplex::new(&z(), 0, vec![bad.cod.clone(), x], vec![bad]).is_err());
}

#[test]
fn outer_differentials_square_to_zero() {
    let x = mult(1);
    let id = ChainMap::identity(&x);
    let r = DoubleComplex::new(&z(), 0, vec![x.clone(), x.clone(), x.clone()], vec![id.clone(), id]);
    assert!(matches!(r, Err(Error::Invalid(_))));
}

#[test]
fn concentrated_objects_need_no_steps() {
    let x = mult(5);
    let c = zigzag_to_tot(&DoubleComplex::concentrated(&x, 2)).unwrap();
    assert!(c.steps.is_empty());
    assert!(endpoint_is_tot(&c));
    assert!(zigzag_to_tot(&DoubleComplex::zero(&z())).unwrap().steps.is_empty());
}

#[test]
fn arrows_take_two_steps() {
    let x = mult(2);
    let f = ChainMap::new(x.clone(), x.clone(), |_| zm(1, 1, &[-1])).unwrap();
    for low in [-1, 0, 3] {
        let c = zigzag_to_tot(&arrow(&f, low)).unwrap();
        assert_eq!(
            c.tags(),
            vec![(Orientation::Forward, Tag::Qis), (Orientation::Backward, Tag::Lw)]
        );
        assert_eq!(c.shift, low);
        assert!(endpoint_is_tot(&c));
        assert!(c.verify().is_ok());
    }
}

#[test]
fn step_verification() {
    let x = arrow(&ChainMap::identity(&mult(3)), 0);
    let id = DoubleMap::identity(&x);
    for tag in [Tag::Qis, Tag::Lw] {
        assert!(verify_step(&Step::new(id.clone(), Orientation::Forward, tag)));
    }
    // an outer-contractible object: zero into it is a quasi-isomorphism
    let zero = DoubleMap::zero(&DoubleComplex::zero(&z()), &x);
    assert!(verify_step(&Step::new(zero.clone(), Orientation::Forward, Tag::Qis)));
    assert!(!verify_step(&Step::new(zero, Orientation::Forward, Tag::Lw)));
    // a levelwise acyclic object in one outer degree: the total map is a
    // quasi-isomorphism, but the outer cone is not row exact
    let c = DoubleComplex::concentrated(&cone(&ChainMap::identity(&mult(3))).unwrap(), 1);
    let zero = DoubleMap::zero(&DoubleComplex::zero(&z()), &c);
    assert!(verify_step(&Step::new(zero.clone(), Orientation::Forward, Tag::Lw)));
    assert!(tot_map(&zero).map(|t| crate::complexes::is_quasi_iso(&t)).unwrap());
    assert!(!verify_step(&Step::new(zero, Orientation::Forward, Tag::Qis)));
    let x = DoubleComplex::concentrated(&mult(0), 0);
    let two = DoubleMap::new(x.clone(), x.clone(), |p| {
        ChainMap::new(x.entry(p), x.entry(p), |q| Matrix::scalar(&z(), x.entry(p).rank(q), BigInt::from(2)))
    })
    .unwrap();
    assert!(!verify_step(&Step::new(two, Orientation::Backward, Tag::Qis)));
}

#[test]
fn mislabeled_steps_are_rejected() {
    let x = mult(2);
    let f = ChainMap::new(x.clone(), x.clone(), |_| zm(1, 1, &[1])).unwrap();
    let r = with_mutation(Some(Mutation::MislabelQis), || zigzag_to_tot(&arrow(&f, 0)));
    assert!(matches!(r, Err(Error::Verification(_))));
}

#[test]
fn solid_witnesses() {
    let p = DoubleParams::default();
    let mut g = rng(11);
    let x = random_double_complex(&z(), &mut g, &p, false);
    let c = solid_witness(&DoubleMap::identity(&x)).unwrap();
    assert!(c.verify().is_ok() && levelwise_acyclic(&c.end));
    assert!(crate::complexes::is_acyclic(&tot_outer(&c.end)));
    let two = DoubleMap::new(x.clone(), x.clone(), |q| {
        let e = x.entry(q);
        ChainMap::new(e.clone(), e.clone(), |n| Matrix::scalar(&z(), e.rank(n), BigInt::from(2)))
    })
    .unwrap();
    if !two.is_levelwise_quasi_iso() {
        assert!(matches!(solid_witness(&two), Err(Error::Precondition(_))));
    }
    let zero = DoubleMap::zero(&DoubleComplex::zero(&z()), &arrow(&ChainMap::identity(&mult(2)), 0));
    assert!(matches!(solid_witness(&zero), Err(Error::Precondition(_))));
}

#[test]
fn cone_comparison_trivial_cases() {
    let x = arrow(&ChainMap::identity(&mult(4)), 1);
    for f in [DoubleMap::identity(&x), DoubleMap::zero(&x, &x)] {
        let c = cone_compare(&f).unwrap();
        assert_eq!(c.tags(), vec![(Orientation::Forward, Tag::Qis), (Orientation::Backward, Tag::Lw)]);
        assert!(tot_homology_mismatches(&c).unwrap().is_empty());
        let (a, b) = (tot_outer(&outer_cone(&f).unwrap()), tot_outer(&levelwise_cone(&f).unwrap()));
        assert!(same_homology(&a, &b));
    }
}

#[test]
fn certificates_compose() {
    let mut g = rng(5);
    let p = DoubleParams::default();
    let f = random_outer_morphism(&z(), &mut g, &p, true).unwrap();
    let a = solid_witness(&f).unwrap();
    let b = ZigzagCertificate::empty(&a.end);
    assert_eq!(a.compose(&b).unwrap(), a);
    let c = cone_compare(&f).unwrap();
    assert!(a.compose(&c).is_err() || a.end == c.start);
}

#[test]
fn polynomial_entries() {
    let r = PolyRing::new(Rationals, vec!["x".into()], MonomialOrder::GRevLex).unwrap();
    let mut g = rng(3);
    let a = random_complex(&r, &mut g, 0, 1, 1, 1);
    let b = random_complex(&r, &mut g, 0, 1, 1, 1);
    let f = random_chain_map(&a, &b, &mut g, 1);
    let x = DoubleComplex::new(&r, 0, vec![b, a], vec![f]).unwrap();
    let c = zigzag_to_tot(&x).unwrap();
    assert!(endpoint_is_tot(&c));
    let m = random_outer_morphism(&r, &mut g, &DoubleParams::default(), false).unwrap();
    assert!(cone_compare(&m).unwrap().verify().is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn zigzags_reach_the_totalization(seed: u64) {
        let x = random_double_complex(&z(), &mut rng(seed), &DoubleParams::default(), false);
        let c = zigzag_to_tot(&x).unwrap();
        prop_assert!(c.verify().is_ok());
        prop_assert!(endpoint_is_tot(&c));
        prop_assert_eq!(c.steps.len(), 2 * x.length());
        prop_assert_eq!(euler_characteristic(&tot_outer(&x)), x.euler_characteristic());
        for s in c.steps.iter().filter(|s| s.tag == Tag::Qis) {
            prop_assert!(crate::complexes::is_quasi_iso(&tot_map(&s.map).unwrap()));
        }
    }

    #[test]
    fn cone_comparisons_agree_on_homology(seed: u64) {
        let f = random_outer_morphism(&z(), &mut rng(seed), &DoubleParams::default(), false).unwrap();
        let c = cone_compare(&f).unwrap();
        prop_assert!(c.verify().is_ok());
        prop_assert!(tot_homology_mismatches(&c).unwrap().is_empty());
        let (a, b) = (tot_outer(&outer_cone(&f).unwrap()), tot_outer(&levelwise_cone(&f).unwrap()));
        prop_assert!(same_homology(&a, &b));
    }

    #[test]
    fn solid_witnesses_end_levelwise_acyclic(seed: u64) {
        let f = random_outer_morphism(&z(), &mut rng(seed), &DoubleParams::default(), true).unwrap();
        prop_assert!(f.is_levelwise_quasi_iso());
        let c = solid_witness(&f).unwrap();
        prop_assert!(c.verify().is_ok());
        prop_assert!(levelwise_acyclic(&c.end));
    }
}
