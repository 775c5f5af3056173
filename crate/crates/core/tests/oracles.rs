//! Gröbner membership and Smith forms against dense, independent oracles.

mod common;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use common::*;
use koszulkit::arith::{smith_normal_form, Ideal, Integers, Matrix, Ring};
use koszulkit::random::rng;

fn smith_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let z = Integers;
    let data = m.iter().flatten().map(|&v| z.from_i64(v)).collect();
    let a = Matrix::from_vec(&z, m.len(), m[0].len(), data);
    let s = smith_normal_form(&a).unwrap();
    assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
    s.invariant_factors().into_iter().map(|d| d.abs()).collect()
}

#[test]
fn oracle_sanity() {
    assert_eq!(monomials(2, 2).len(), 3);
    assert_eq!(monomials(3, 4).len(), 15);
    assert_eq!(
        determinantal_factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
        vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
    );
    assert!(determinantal_factors(&[vec![0, 0]]).is_empty());
    let r = koszulkit::koszul::suite_ring(2);
    let p = |s: &str| r.parse_elem(s).unwrap();
    let gens = [p("x^2"), p("x*y + y^2")];
    assert!(dense_member(&r, &gens, &p("x^2*y - y^3")));
    assert!(dense_member(&r, &gens, &p("y^3")));
    assert!(!dense_member(&r, &gens, &p("y^2")));
    assert!(dense_member(&r, &gens, &p("y^4 + x^3*y")));
}

#[test]
fn groebner_basis_of_the_worked_example() {
    let r = koszulkit::koszul::suite_ring(2);
    let p = |s: &str| r.parse_elem(s).unwrap();
    let i = Ideal::new(&r, vec![p("x^2"), p("x*y + y^2")]);
    for f in ["x^2*y - y^3", "y^2", "y^3", "x*y^3", "x^3 + x*y + y^2"] {
        assert_eq!(i.contains(&p(f)), dense_member(&r, &[p("x^2"), p("x*y + y^2")], &p(f)), "{f}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn membership_agrees_with_linear_algebra(seed in any::<u64>()) {
        let (r, gens, f) = membership_instance(&mut rng(seed));
        let gb = Ideal::new(&r, gens.clone()).contains(&f);
        prop_assert_eq!(gb, dense_member(&r, &gens, &f), "{:?} in {:?}", f, gens);
    }

    #[test]
    fn smith_form_has_determinantal_invariants(seed in any::<u64>()) {
        let m = small_matrix(&mut rng(seed));
        prop_assert_eq!(smith_factors(&m), determinantal_factors(&m));
    }
}
