use super::*;
use crate::arith::{MonomialOrder, PolyRing, Rationals};

type Q = PolyRing<Rationals>;

fn ring() -> Q {
    PolyRing::new(Rationals, vec!["x".into(), "y".into()], MonomialOrder::GRevLex).unwrap()
}

fn mat(r: &Q, rows: usize, cols: usize, s: &[&str]) -> Matrix<Q> {
    Matrix::from_vec(r, rows, cols, s.iter().map(|t| r.parse_elem(t).unwrap()).collect())
}

fn cyclic(r: &Q, gens: &[&str]) -> PresentedModule<Q> {
    PresentedModule::new(mat(r, 1, gens.len(), gens))
}

#[test]
fn syzygies_of_row() {
    let r = ring();
    let f = mat(&r, 1, 2, &["x", "y"]);
    let k = syzygies(&f);
    assert_eq!(k.generators, mat(&r, 2, 1, &["y", "-x"]));
    assert!(f.mul(&k.generators).is_zero());
    assert!(k.module.is_visibly_free());
    let inj = mat(&r, 2, 1, &["x", "y"]);
    assert_eq!(syzygies(&inj).generators.cols(), 0);
}

#[test]
fn injectivity() {
    let r = ring();
    assert!(is_injective(&mat(&r, 1, 1, &["x"])));
    assert!(!is_injective(&mat(&r, 1, 1, &["0"])));
    assert!(!is_injective(&mat(&r, 1, 2, &["x", "y"])));
    assert!(!is_injective_by_syzygies(&mat(&r, 1, 2, &["x", "y"])));
}

#[test]
fn annihilation() {
    let r = ring();
    let m = cyclic(&r, &["x^2"]);
    let x = r.parse_elem("x").unwrap();
    let y = r.parse_elem("y").unwrap();
    assert_eq!(power_annihilates(&x, &m, 8).unwrap(), Some(2));
    assert_eq!(power_annihilates(&y, &m, 8).unwrap(), None);
    assert_eq!(power_annihilates(&y, &PresentedModule::zero(&r), 8).unwrap(), Some(1));
    assert!(power_annihilates(&y, &m, 0).is_err());
}

#[test]
fn support() {
    let r = ring();
    let x = r.parse_elem("x").unwrap();
    let y = r.parse_elem("y").unwrap();
    assert!(supported_on(&cyclic(&r, &["x"]), &[x.clone()]));
    assert!(!supported_on(&cyclic(&r, &["x"]), &[y.clone()]));
    assert!(supported_on(&cyclic(&r, &["x^2", "x*y"]), &[x.clone()]));
    assert!(!supported_on(&PresentedModule::free(&r, 1), &[x.clone()]));
    assert!(supported_on(&PresentedModule::free(&r, 1), &[]));
}

#[test]
fn saturation_beyond_power_bound() {
    let r = ring();
    let x = r.parse_elem("x").unwrap();
    let m = cyclic(&r, &["x^20"]);
    assert_eq!(power_annihilates(&x, &m, DEFAULT_POWER_BOUND).unwrap(), None);
    assert!(supported_on(&m, &[x]));
}

#[test]
fn projective_dimensions() {
    let r = ring();
    assert!(pd_at_most(&PresentedModule::free(&r, 2), 0).unwrap());
    assert!(pd_at_most(&cyclic(&r, &["x"]), 1).unwrap());
    assert!(!pd_at_most(&cyclic(&r, &["x"]), 0).unwrap());
    assert!(!pd_at_most(&cyclic(&r, &["x", "y"]), 1).unwrap());
    assert_eq!(projective_dimension(&cyclic(&r, &["x", "y"])).unwrap(), Some(2));
    // a presentation with a unit entry collapses to a free module
    let m = PresentedModule::new(mat(&r, 2, 1, &["1", "x"]));
    assert_eq!(projective_dimension(&m).unwrap(), Some(0));
    assert_eq!(projective_dimension(&cyclic(&r, &["1"])).unwrap(), None);
    let bad = PresentedModule::new(mat(&r, 1, 1, &["x + 1"]));
    assert!(matches!(pd_at_most(&bad, 1), Err(Error::Unsupported(_))));
}

#[test]
fn pd_bound_agrees_with_the_resolution() {
    let r = ring();
    let mods = [
        cyclic(&r, &["x", "y"]),
        cyclic(&r, &["x^2", "x*y", "y^3"]),
        PresentedModule::new(mat(&r, 2, 2, &["x", "0", "y", "x^2"])),
        PresentedModule::free(&r, 1),
    ];
    for m in &mods {
        let d = projective_dimension(m).unwrap().unwrap_or(0);
        for p in 0..4 {
            assert_eq!(pd_at_most(m, p).unwrap(), d <= p, "p = {p}");
        }
    }
}

#[test]
fn homology_of_pairs() {
    let r = ring();
    let a = PresentedModule::free(&r, 1);
    let zero = FpMap::zero(&a, &a);
    let h = homology_pair(&zero, &zero).unwrap();
    assert!(!h.is_zero());
    // [A --x--> A --> 0]
    let d1 = FpMap::new(a.clone(), a.clone(), mat(&r, 1, 1, &["x"])).unwrap();
    let z = PresentedModule::zero(&r);
    let d0 = FpMap::zero(&a, &z);
    let h = homology_pair(&d1, &d0).unwrap();
    let x = r.parse_elem("x").unwrap();
    assert_eq!(power_annihilates(&x, &h, 4).unwrap(), Some(1));
    assert!(!h.is_zero());
    // middle of the Koszul complex on (x, y)
    let a2 = PresentedModule::free(&r, 2);
    let k2 = FpMap::new(a.clone(), a2.clone(), mat(&r, 2, 1, &["-y", "x"])).unwrap();
    let k1 = FpMap::new(a2, a.clone(), mat(&r, 1, 2, &["x", "y"])).unwrap();
    assert!(homology_pair(&k2, &k1).unwrap().is_zero());
    assert!(homology_pair(&k1, &k2).is_err());
}

#[test]
fn isomorphisms() {
    let r = ring();
    let m = cyclic(&r, &["x", "y"]);
    assert!(FpMap::identity(&m).is_isomorphism());
    let by_x = FpMap::new(m.clone(), m.clone(), mat(&r, 1, 1, &["x"])).unwrap();
    assert!(by_x.is_zero() && !by_x.is_isomorphism());
    let by_3 = FpMap::new(m.clone(), m.clone(), mat(&r, 1, 1, &["3"])).unwrap();
    assert!(by_3.is_isomorphism());
    let a = PresentedModule::free(&r, 1);
    assert!(FpMap::new(m, a, mat(&r, 1, 1, &["1"])).is_err());
}

#[test]
fn integer_modules() {
    use crate::arith::Integers;
    use num_bigint::BigInt;
    let z = |v: &[i64], rows, cols| {
        Matrix::from_vec(&Integers, rows, cols, v.iter().map(|&x| BigInt::from(x)).collect())
    };
    let m = PresentedModule::new(z(&[2, 0, 0, 3], 2, 2));
    assert!(!m.is_zero());
    assert_eq!(projective_dimension(&m).unwrap(), Some(1));
    let two = BigInt::from(6);
    assert_eq!(power_annihilates(&two, &m, 3).unwrap(), Some(1));
    let unit = PresentedModule::new(z(&[2, 3], 1, 2));
    assert!(unit.is_zero());
}
