//! Deterministic generators for suites and property tests.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::poly::Monomial;
use crate::arith::linalg::solve_matrix;
use crate::arith::{ExactRing, Field, Integers, Matrix, PolyRing, Ring};
use crate::complexes::{ChainComplex, ChainMap};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rings with small random elements.
pub trait Sample: Ring {
    /// An element of degree at most `deg` with small coefficients.
    fn sample(&self, rng: &mut SuiteRng, deg: u32) -> Self::Elem;
    /// A homogeneous element of degree exactly `deg`, possibly zero.
    fn sample_homogeneous(&self, rng: &mut SuiteRng, deg: i64) -> Self::Elem;
    /// A random unit.
    fn sample_unit(&self, rng: &mut SuiteRng) -> Self::Elem;
}

fn small(rng: &mut SuiteRng) -> i64 {
    *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap()
}

impl Sample for Integers {
    fn sample(&self, rng: &mut SuiteRng, _deg: u32) -> BigInt {
        BigInt::from(rng.gen_range(-3..=3))
    }
    fn sample_homogeneous(&self, rng: &mut SuiteRng, deg: i64) -> BigInt {
        if deg == 0 {
            self.sample(rng, 0)
        } else {
            BigInt::from(0)
        }
    }
    fn sample_unit(&self, rng: &mut SuiteRng) -> BigInt {
        BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 })
    }
}

fn random_monomial(rng: &mut SuiteRng, nvars: usize, deg: u32) -> Monomial {
    let mut m = Monomial::one(nvars);
    for _ in 0..deg {
        if nvars > 0 {
            m = m.mul(&Monomial::var(nvars, rng.gen_range(0..nvars), 1));
        }
    }
    m
}

impl<F: Field> PolyRing<F> {
    fn nonzero_constant(&self, rng: &mut SuiteRng) -> F::Elem {
        loop {
            let c = self.field.from_i64(small(rng));
            if !self.field.is_zero(&c) {
                return c;
            }
        }
    }
}

impl<F: Field> Sample for PolyRing<F> {
    fn sample(&self, rng: &mut SuiteRng, deg: u32) -> Self::Elem {
        let mut p = self.zero();
        for _ in 0..rng.gen_range(0..=3) {
            let d = rng.gen_range(0..=deg);
            let m = random_monomial(rng, self.nvars(), d);
            let c = self.nonzero_constant(rng);
            p = self.add(&p, &self.monomial(m, c));
        }
        p
    }
    fn sample_homogeneous(&self, rng: &mut SuiteRng, deg: i64) -> Self::Elem {
        if deg < 0 || (deg > 0 && self.nvars() == 0) {
            return self.zero();
        }
        let mut p = self.zero();
        for _ in 0..rng.gen_range(0..=2) {
            let m = random_monomial(rng, self.nvars(), deg as u32);
            let c = self.nonzero_constant(rng);
            p = self.add(&p, &self.monomial(m, c));
        }
        p
    }
    fn sample_unit(&self, rng: &mut SuiteRng) -> Self::Elem {
        let c = self.nonzero_constant(rng);
        self.constant(c)
    }
}

/// A random invertible matrix together with its inverse. With `weights`,
/// entry `(i, j)` is homogeneous of degree `weights[j] - weights[i]`, so the
/// change of basis preserves the grading.
pub fn unimodular<R: Sample>(
    ring: &R,
    rng: &mut SuiteRng,
    n: usize,
    weights: Option<&[i64]>,
) -> (Matrix<R>, Matrix<R>) {
    let mut p = Matrix::identity(ring, n);
    let mut q = Matrix::identity(ring, n);
    if n == 0 {
        return (p, q);
    }
    for i in 0..n {
        let u = ring.sample_unit(rng);
        let v = ring.unit_inverse(&u).expect("unit");
        p.scale_row(i, &u);
        // q p = id: scale the matching column of q
        for k in 0..n {
            let x = ring.mul(q.get(k, i), &v);
            q.set(k, i, x);
        }
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let c = match weights {
            // high-degree shears blow up every later Gröbner computation
            Some(w) if w[j] - w[i] > 1 => continue,
            Some(w) => ring.sample_homogeneous(rng, w[j] - w[i]),
            None => ring.sample(rng, 1),
        };
        if ring.is_zero(&c) {
            continue;
        }
        // p <- E p with E = I + c e_ij; q <- q E^{-1}
        p.add_row_multiple(i, j, &c);
        q.add_col_multiple(j, i, &ring.neg(&c));
    }
    (p, q)
}

/// Conjugate a complex degreewise by random changes of basis. Returns the new
/// complex and the isomorphism from the old one.
pub fn conjugate<R: Sample>(x: &ChainComplex<R>, rng: &mut SuiteRng) -> (ChainComplex<R>, ChainMap<R>) {
    let r = x.ring();
    let Some((lo, hi)) = x.support() else {
        return (x.clone(), ChainMap::identity(x));
    };
    let mut ps = Vec::new();
    for n in lo..=hi {
        ps.push(unimodular(r, rng, x.rank(n), None));
    }
    let get = |n: i64| -> Option<&(Matrix<R>, Matrix<R>)> {
        if n < lo || n > hi {
            None
        } else {
            ps.get((n - lo) as usize)
        }
    };
    let y = ChainComplex::from_fn(r, lo, hi, |n| x.rank(n), |n| {
        let (p, _) = get(n - 1).map_or((Matrix::zeros(r, 0, 0), Matrix::zeros(r, 0, 0)), |t| t.clone());
        let (_, q) = get(n).expect("in range");
        p.mul(&x.d(n)).mul(q)
    })
    .expect("conjugated complex");
    let iso = ChainMap::new(x.clone(), y.clone(), |n| match get(n) {
        Some((p, _)) => p.clone(),
        None => Matrix::zeros(r, 0, 0),
    })
    .expect("conjugation is a chain map");
    (y, iso)
}

/// A random bounded complex in degrees `[low, low + len]`: a direct sum of
/// modules in single degrees and two-term pieces `[A --a--> A]`, then
/// conjugated.
pub fn random_complex<R: Sample>(
    ring: &R,
    rng: &mut SuiteRng,
    low: i64,
    len: usize,
    max_rank: usize,
    deg: u32,
) -> ChainComplex<R> {
    let hi = low + len as i64;
    let cap = max_rank.max(1);
    let mut x = ChainComplex::zero(ring);
    for n in low..=hi {
        if n > low && x.rank(n) < cap && x.rank(n - 1) < cap && rng.gen_bool(0.7) {
            let a = ring.sample(rng, deg);
            let piece = ChainComplex::from_differentials(ring, n - 1, vec![Matrix::scalar(ring, 1, a)])
                .expect("two-term piece");
            x = x.direct_sum(&piece);
        }
        if x.rank(n) < cap && rng.gen_bool(0.5) {
            let k = rng.gen_range(1..=cap - x.rank(n));
            x = x.direct_sum(&ChainComplex::concentrated(ring, n, k));
        }
    }
    conjugate(&x, rng).0
}

/// A random null-homotopic map `dH + Hd: x -> y`.
pub fn random_null_homotopic<R: Sample>(
    x: &ChainComplex<R>,
    y: &ChainComplex<R>,
    rng: &mut SuiteRng,
    deg: u32,
) -> ChainMap<R> {
    let r = x.ring();
    let lo = x.low().min(y.low()) - 1;
    let hi = x.high().max(y.high()) + 1;
    let hs: Vec<Matrix<R>> = (lo..=hi)
        .map(|n| random_matrix(r, rng, y.rank(n + 1), x.rank(n), deg))
        .collect();
    let h = |n: i64| -> Matrix<R> {
        if n < lo || n > hi {
            Matrix::zeros(r, y.rank(n + 1), x.rank(n))
        } else {
            hs[(n - lo) as usize].clone()
        }
    };
    ChainMap::new(x.clone(), y.clone(), |n| y.d(n + 1).mul(&h(n)).add(&h(n - 1).mul(&x.d(n))))
        .expect("null-homotopic map")
}

pub fn random_matrix<R: Sample>(ring: &R, rng: &mut SuiteRng, rows: usize, cols: usize, deg: u32) -> Matrix<R> {
    let data = (0..rows * cols).map(|_| ring.sample(rng, deg)).collect();
    Matrix::from_vec(ring, rows, cols, data)
}

/// A random chain map `x -> y`: null-homotopic part plus, when `x = y`, a
/// scalar multiple of the identity.
pub fn random_chain_map<R: Sample>(
    x: &ChainComplex<R>,
    y: &ChainComplex<R>,
    rng: &mut SuiteRng,
    deg: u32,
) -> ChainMap<R> {
    let f = random_null_homotopic(x, y, rng, deg);
    if x == y && rng.gen_bool(0.6) {
        let c = x.ring().from_i64(rng.gen_range(-2..=2));
        let r = x.ring().clone();
        let s = ChainMap::new(x.clone(), y.clone(), |n| Matrix::scalar(&r, x.rank(n), c.clone()))
            .expect("scalar map");
        return f.add(&s).expect("same ends");
    }
    f
}

/// A strict retraction `p ∘ i = id_x` with `y` a twisted extension of `x` by
/// a random complex `w`, conjugated.
pub fn random_retraction<R: Sample + ExactRing>(
    ring: &R,
    rng: &mut SuiteRng,
    len: usize,
    max_rank: usize,
    deg: u32,
) -> (ChainMap<R>, ChainMap<R>) {
    let x = random_complex(ring, rng, 0, len, max_rank, deg);
    let w = random_complex(ring, rng, 0, len, max_rank, deg);
    let lo = -1;
    let hi = len as i64 + 1;
    let ks: Vec<Matrix<R>> = (lo..=hi)
        .map(|n| random_matrix(ring, rng, x.rank(n), w.rank(n), deg))
        .collect();
    let k = |n: i64| -> Matrix<R> {
        if n < lo || n > hi {
            Matrix::zeros(ring, x.rank(n), w.rank(n))
        } else {
            ks[(n - lo) as usize].clone()
        }
    };
    // d^y = [[d^x, c], [0, d^w]] with c = d^x k - k d^w
    let y = ChainComplex::from_fn(ring, lo, hi, |n| x.rank(n) + w.rank(n), |n| {
        let c = x.d(n).mul(&k(n)).sub(&k(n - 1).mul(&w.d(n)));
        Matrix::blocks(
            ring,
            &[x.rank(n - 1), w.rank(n - 1)],
            &[x.rank(n), w.rank(n)],
            &[&[Some(&x.d(n)), Some(&c)], &[None, Some(&w.d(n))]],
        )
    })
    .expect("twisted extension");
    let i = ChainMap::new(x.clone(), y.clone(), |n| {
        Matrix::identity(ring, x.rank(n)).vstack(&Matrix::zeros(ring, w.rank(n), x.rank(n)))
    })
    .expect("inclusion");
    let p = ChainMap::new(y.clone(), x.clone(), |n| Matrix::identity(ring, x.rank(n)).hstack(&k(n)))
        .expect("retraction");
    let (_, iso) = conjugate(&y, rng);
    let inv = inverse_of_conjugation(&iso);
    let i2 = iso.compose(&i).expect("composable");
    let p2 = p.compose(&inv).expect("composable");
    (i2, p2)
}

/// Inverse of a chain isomorphism whose components are invertible matrices.
pub fn inverse_of_conjugation<R: ExactRing>(iso: &ChainMap<R>) -> ChainMap<R> {
    let r = iso.ring().clone();
    ChainMap::new(iso.cod.clone(), iso.dom.clone(), |n| {
        let m = iso.at(n);
        solve_matrix(&m, &Matrix::identity(&r, m.rows())).expect("invertible component")
    })
    .expect("inverse chain map")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{MonomialOrder, Rationals};

    #[test]
    fn unimodular_inverse() {
        let r = PolyRing::new(Rationals, vec!["x".into(), "y".into()], MonomialOrder::GRevLex).unwrap();
        let mut g = rng(7);
        for n in 0..5 {
            let (p, q) = unimodular(&r, &mut g, n, Some(&[0, 1, 1, 2, 0][..n]));
            assert!(p.mul(&q).is_identity() && q.mul(&p).is_identity());
        }
        let (p, q) = unimodular(&Integers, &mut g, 4, None);
        assert!(p.mul(&q).is_identity());
    }

    #[test]
    fn determinism() {
        let a = random_complex(&Integers, &mut rng(3), 0, 2, 3, 1);
        let b = random_complex(&Integers, &mut rng(3), 0, 2, 3, 1);
        assert_eq!(a, b);
    }
}
