//! Ideals of polynomial rings over fields.

use std::sync::OnceLock;

use super::gb::{ideal_basis, ideal_normal_form};
use super::linalg::kernel;
use super::matrix::Matrix;
use super::poly::{Poly, PolyRing};
use super::ring::{Field, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Ideal<F: Field> {
    ring: PolyRing<F>,
    gens: Vec<Poly<F::Elem>>,
    basis: OnceLock<Vec<Poly<F::Elem>>>,
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: &PolyRing<F>, gens: Vec<Poly<F::Elem>>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens,
            basis: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly<F::Elem>] {
        &self.gens
    }

    /// Reduced Groebner basis, computed once.
    pub fn basis(&self) -> &[Poly<F::Elem>] {
        self.basis.get_or_init(|| ideal_basis(&self.ring, &self.gens))
    }

    pub fn normal_form(&self, f: &Poly<F::Elem>) -> Poly<F::Elem> {
        ideal_normal_form(&self.ring, self.basis(), f)
    }

    pub fn contains(&self, f: &Poly<F::Elem>) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_unit(&self) -> bool {
        let b = self.basis();
        b.len() == 1 && self.ring.is_constant(&b[0])
    }

    /// Generators of `(self : f)`.
    pub fn colon(&self, f: &Poly<F::Elem>) -> Ideal<F> {
        let r = &self.ring;
        let mut row = vec![f.clone()];
        row.extend(self.basis().iter().cloned());
        let m = Matrix::from_rows(r, 1, row.len(), vec![row]);
        let k = kernel(&m);
        let gens = (0..k.cols()).map(|j| k.get(0, j).clone()).collect();
        Ideal::new(r, gens)
    }

    pub fn contains_ideal(&self, o: &Ideal<F>) -> bool {
        o.generators().iter().all(|g| self.contains(g))
    }
}

fn check_ring<F: Field>(r: &PolyRing<F>, s: &PolyRing<F>) -> Result<()> {
    if r != s {
        return Err(Error::RingMismatch(format!(
            "{} vs {}",
            r.descriptor().to_text(),
            s.descriptor().to_text()
        )));
    }
    Ok(())
}

pub fn groebner_basis<F: Field>(ring: &PolyRing<F>, gens: &[Poly<F::Elem>]) -> Vec<Poly<F::Elem>> {
    ideal_basis(ring, gens)
}

pub fn ideal_membership<F: Field>(
    ring: &PolyRing<F>,
    f: &Poly<F::Elem>,
    ideal: &Ideal<F>,
) -> Result<bool> {
    check_ring(ring, ideal.ring())?;
    Ok(ideal.contains(f))
}

/// `f^m in I` for some `m >= 1`, via `1 in I + (1 - t f)`.
pub fn radical_membership<F: Field>(
    ring: &PolyRing<F>,
    f: &Poly<F::Elem>,
    ideal: &Ideal<F>,
) -> Result<bool> {
    check_ring(ring, ideal.ring())?;
    let mut name = String::from("t_");
    while ring.names().contains(&name) {
        name.push('_');
    }
    let ext = ring.extend(&name);
    let t = ext.var(ring.nvars());
    let mut gens: Vec<_> = ideal.generators().iter().map(|g| ring.embed(g, &ext)).collect();
    let tf = ext.mul(&t, &ring.embed(f, &ext));
    gens.push(ext.sub(&ext.one(), &tf));
    Ok(Ideal::new(&ext, gens).is_unit())
}

/// Regular in every order and generating a proper ideal. At most four elements.
pub fn is_regular_sequence<F: Field>(ring: &PolyRing<F>, fs: &[Poly<F::Elem>]) -> Result<bool> {
    let n = fs.len();
    if n == 0 {
        return Err(Error::Invalid("empty sequence".into()));
    }
    if n > 4 {
        return Err(Error::Unsupported(format!(
            "regularity in every order is checked for at most 4 elements, got {n}"
        )));
    }
    if Ideal::new(ring, fs.to_vec()).is_unit() {
        return Ok(false);
    }
    // every permutation prefix is a subset J followed by an element outside it
    for mask in 0u32..(1 << n) {
        let prefix: Vec<_> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| fs[i].clone()).collect();
        let j = Ideal::new(ring, prefix);
        for i in (0..n).filter(|i| mask >> i & 1 == 0) {
            if fs[i].is_zero() || !j.contains_ideal(&j.colon(&fs[i])) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::{MonomialOrder, Rationals};

    fn ring() -> PolyRing<Rationals> {
        PolyRing::new(Rationals, vec!["x".into(), "y".into()], MonomialOrder::GRevLex).unwrap()
    }

    #[test]
    fn trivial_bases() {
        let r = ring();
        let p = |s: &str| r.parse_elem(s).unwrap();
        assert_eq!(groebner_basis(&r, &[p("x")]), vec![p("x")]);
        assert_eq!(groebner_basis(&r, &[p("1")]), vec![p("1")]);
        assert_eq!(groebner_basis(&r, &[p("2*x + 2")]), vec![p("x + 1")]);
    }

    #[test]
    fn membership_and_radical() {
        let r = ring();
        let p = |s: &str| r.parse_elem(s).unwrap();
        let i = Ideal::new(&r, vec![p("x")]);
        assert!(ideal_membership(&r, &p("x^2"), &i).unwrap());
        assert!(!ideal_membership(&r, &p("y"), &i).unwrap());
        let i2 = Ideal::new(&r, vec![p("x^2")]);
        assert!(radical_membership(&r, &p("x"), &i2).unwrap());
        assert!(!radical_membership(&r, &p("y"), &i).unwrap());
    }

    #[test]
    fn regular_sequences() {
        let r = ring();
        let p = |s: &str| r.parse_elem(s).unwrap();
        assert!(is_regular_sequence(&r, &[p("x"), p("y")]).unwrap());
        assert!(!is_regular_sequence(&r, &[p("x"), p("x")]).unwrap());
        assert!(!is_regular_sequence(&r, &[p("x*y"), p("x")]).unwrap());
        assert!(!is_regular_sequence(&r, &[p("x"), p("1")]).unwrap());
        assert!(is_regular_sequence(&r, &[p("x^2"), p("y^3")]).unwrap());
        assert!(is_regular_sequence(&r, &[]).is_err());
    }
}
