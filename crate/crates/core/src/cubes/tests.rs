use proptest::prelude::*;

use super::*;
use crate::arith::{Integers, MonomialOrder, PolyRing, Rationals, Ring};
use crate::complexes::euler_characteristic;

type Q = PolyRing<Rationals>;

fn ring() -> Q {
    PolyRing::new(Rationals, vec!["x".into(), "y".into()], MonomialOrder::GRevLex).unwrap()
}

fn dirs(n: usize) -> DirectionSet {
    DirectionSet::new((1..=n).map(|i| format!("e{i}")).collect()).unwrap()
}

fn el(r: &Q, s: &str) -> <Q as Ring>::Elem {
    r.parse_elem(s).unwrap()
}

/// Rank-one cube with `d^k = f_k` everywhere.
fn typ(r: &Q, fs: &[&str]) -> Cube<Q> {
    let fs: Vec<_> = fs.iter().map(|s| el(r, s)).collect();
    let n = fs.len();
    Cube::free(r, dirs(n), &vec![1; 1 << n], |_, k| Matrix::scalar(r, 1, fs[k].clone())).unwrap()
}

#[test]
fn bit_helpers() {
    assert_eq!(drop_bit(0b1011, 1), 0b101);
    assert_eq!(insert_bit(0b101, 1, true), 0b1011);
    assert_eq!(insert_bit(0b101, 1, false), 0b1001);
    assert_eq!(members(0b1010), vec![1, 3]);
    let d = dirs(3);
    assert_eq!(d.mask_of(&["e3".into(), "e1".into()]).unwrap(), 0b101);
    assert_eq!(d.labels_of(0b110), vec!["e2".to_string(), "e3".to_string()]);
    assert!(DirectionSet::new(vec!["a".into(), "a".into()]).is_err());
    assert!(d.mask_of(&["z".into()]).is_err());
}

#[test]
fn validation() {
    let r = ring();
    let x = el(&r, "x");
    let bad = Cube::free(&r, dirs(2), &[1, 1, 1, 1], |t, k| {
        if t == 0b11 && k == 0 {
            Matrix::scalar(&r, 1, r.one())
        } else {
            Matrix::scalar(&r, 1, x.clone())
        }
    });
    assert!(matches!(bad, Err(Error::Invalid(_))));
    let shape = Cube::free(&r, dirs(1), &[1, 2], |_, _| Matrix::zeros(&r, 1, 1));
    assert!(matches!(shape, Err(Error::Dimension(_))));
    let ill = Cube::new(
        &r,
        dirs(1),
        vec![PresentedModule::new(Matrix::scalar(&r, 1, x.clone())), PresentedModule::free(&r, 1)],
        |_, _| Matrix::scalar(&r, 1, r.one()),
    );
    assert!(ill.is_ok());
    let ill = Cube::new(
        &r,
        dirs(1),
        vec![PresentedModule::free(&r, 1), PresentedModule::new(Matrix::scalar(&r, 1, x))],
        |_, _| Matrix::scalar(&r, 1, r.one()),
    );
    assert!(ill.is_err());
}

#[test]
fn koszul_square_totalizes_to_koszul_complex() {
    let r = ring();
    let c = typ(&r, &["x", "y"]);
    assert!(is_monic(&c));
    assert!(is_admissible(&c));
    let tot = totalize(&c).unwrap();
    assert_eq!((tot.rank(0), tot.rank(1), tot.rank(2)), (1, 2, 1));
    assert_eq!(tot.d(1).to_text(), "1x2 [x, y]");
    assert_eq!(tot.d(2).to_text(), "2x1 [-y; x]");
    let rep = verify_totisom(&c).unwrap();
    assert!(rep.passed(), "{rep:?}");
    let h = h0_iterated(&c, 0b11).unwrap();
    assert_eq!(h.dim(), 0);
    assert_eq!(h.vertex(0).relations().to_text(), "1x2 [x, y]");
    assert!(order_independence(&c, &["e2".into(), "e1".into()]).unwrap());
}

#[test]
fn repeated_element_is_monic_but_not_admissible() {
    let r = ring();
    let c = typ(&r, &["x", "x"]);
    assert!(is_monic(&c));
    assert!(!is_admissible(&c));
    assert!(matches!(verify_totisom(&c), Err(Error::Precondition(_))));
    let rep = totisom_report(&c).unwrap();
    assert!(!rep.passed());
    assert_eq!(rep.higher_vanish, vec![(1, false), (2, true)]);
}

#[test]
fn h0_direction_faces() {
    let r = ring();
    let c = typ(&r, &["x", "y", "x+y"]);
    let h = h0_direction(&c, 1).unwrap();
    assert_eq!(h.dirs().labels(), &["e1".to_string(), "e3".to_string()]);
    assert_eq!(h.vertex(0b10).relations().to_text(), "1x1 [y]");
    assert!(h.non_commuting_square().is_none());
    // x, y, x+y is not regular: the third element is a zero divisor mod (x, y).
    assert!(!is_admissible(&c));
    let ok = typ(&r, &["x", "y^2", "1"]);
    assert!(is_admissible(&ok));
    assert!(verify_totisom(&ok).unwrap().passed());
}

#[test]
fn zero_and_point_cubes() {
    let r = ring();
    let z = Cube::zero(&r, dirs(2));
    assert!(z.is_zero() && is_admissible(&z));
    assert!(verify_totisom(&z).unwrap().passed());
    let p = Cube::point(PresentedModule::free(&r, 2));
    assert!(is_admissible(&p));
    assert_eq!(totalize(&p).unwrap().rank(0), 2);
    let m = concentrated_at_bottom(dirs(2), PresentedModule::free(&r, 1));
    assert!(m.validate().is_ok());
    assert!(!is_monic(&Cube::free(&r, dirs(1), &[1, 1], |_, _| Matrix::zeros(&r, 1, 1)).unwrap()));
}

#[test]
fn cube_maps() {
    let r = ring();
    let a = typ(&r, &["x", "y"]);
    let b = typ(&r, &["x", "y^2"]);
    let y = el(&r, "y");
    // Multiplication by y on the vertices containing direction 2.
    let f = CubeMap::new(a.clone(), b.clone(), |t| {
        if t & 0b10 != 0 {
            Matrix::identity(&r, 1)
        } else {
            Matrix::scalar(&r, 1, y.clone())
        }
    })
    .unwrap();
    let h = f.h0_total().unwrap();
    assert!(!h.is_isomorphism());
    let id = CubeMap::identity(&a);
    assert!(id.h0_total().unwrap().is_isomorphism());
    assert!(id.h0_direction(0).is_ok());
    assert!(CubeMap::new(a.clone(), b, |_| Matrix::identity(&r, 1)).is_err());
    assert_eq!(f.compose(&id).unwrap().maps, f.maps);
}

fn commuting_square(p: i64, q: i64, s: i64) -> Cube<Integers> {
    let z = Integers;
    // d^1_{12} = p q, d^2_1 = s, d^2_{12} = p s, d^1_2 = q
    Cube::free(&z, dirs(2), &[1, 1, 1, 1], |t, k| {
        let v = match (t, k) {
            (0b11, 0) => p * q,
            (0b11, 1) => p * s,
            (0b01, 0) => q,
            _ => s,
        };
        Matrix::scalar(&z, 1, z.from_i64(v))
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bits_round_trip(t in 0u32..256, k in 0usize..8, b: bool) {
        prop_assert_eq!(drop_bit(insert_bit(t, k, b), k), t);
    }

    #[test]
    fn admissible_squares_satisfy_totisom(p in -6i64..7, q in -6i64..7, s in -6i64..7) {
        let c = commuting_square(p, q, s);
        let tot = totalize(&c).unwrap();
        prop_assert_eq!(euler_characteristic(&tot), c.euler_characteristic());
        for k in 0..2 {
            prop_assert!(h0_direction(&c, k).unwrap().non_commuting_square().is_none());
        }
        if is_admissible(&c) {
            prop_assert!(verify_totisom(&c).unwrap().passed());
            prop_assert!(order_independence(&c, &["e2".into(), "e1".into()]).unwrap());
        }
    }
}
