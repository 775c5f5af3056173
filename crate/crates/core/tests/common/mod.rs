//! Test-side oracles that share no code with the library's algorithms.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use koszulkit::arith::{Monomial, Poly, PolyRing, Rat, Rationals, Ring};
use koszulkit::random::{Sample, SuiteRng};

pub type Q = PolyRing<Rationals>;
pub type P = Poly<Rat>;

/// Rank of a dense rational matrix by plain Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let t = &rows[i][c] / &piv;
            for j in c..cols {
                let v = &rows[r][j] * &t;
                rows[i][j] -= v;
            }
        }
        r += 1;
    }
    r
}

/// Exponent vectors of total degree `d` in `n` variables.
pub fn monomials(n: usize, d: u16) -> Vec<Vec<u16>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for e in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

fn coeff(f: &P, m: &[u16]) -> BigRational {
    f.terms
        .iter()
        .find(|(t, _)| t.0.as_slice() == m)
        .map_or_else(BigRational::zero, |(_, c)| c.to_big())
}

/// Membership of a homogeneous `f` in the ideal of homogeneous `gens`,
/// decided in the single degree `deg f` by dense linear algebra: `f` is a
/// member iff it lies in the span of `m * g` with `deg m + deg g = deg f`.
pub fn dense_member(r: &Q, gens: &[P], f: &P) -> bool {
    let Some(d) = r.total_degree(f) else {
        return true;
    };
    let n = r.nvars();
    let basis = monomials(n, d as u16);
    let mut cols: Vec<P> = Vec::new();
    for g in gens {
        let Some(e) = r.total_degree(g) else { continue };
        if e > d {
            continue;
        }
        for m in monomials(n, (d - e) as u16) {
            cols.push(r.mul_term(g, &Monomial(m.into_iter().collect()), &Rat::one()));
        }
    }
    let matrix = |with_f: bool| -> Vec<Vec<BigRational>> {
        basis
            .iter()
            .map(|b| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| coeff(c, b)).collect();
                if with_f {
                    row.push(coeff(f, b));
                }
                row
            })
            .collect()
    };
    rank(matrix(false)) == rank(matrix(true))
}

/// A homogeneous ideal-membership instance: generators of degree 1..=3 and
/// `f` of degree at most 4, a combination of the generators about half the
/// time.
pub fn membership_instance(g: &mut SuiteRng) -> (Q, Vec<P>, P) {
    let r = koszulkit::koszul::suite_ring(g.gen_range(1..=3));
    let gens: Vec<P> = (0..g.gen_range(1..=3))
        .map(|_| {
            let d = g.gen_range(1..=3);
            r.sample_homogeneous(g, d)
        })
        .filter(|p| !p.is_zero())
        .collect();
    let d = g.gen_range(1..=4i64);
    let f = if g.gen_bool(0.5) {
        let mut f = r.zero();
        for h in &gens {
            let e = r.total_degree(h).unwrap();
            f = r.add(&f, &r.mul(&r.sample_homogeneous(g, d - e), h));
        }
        f
    } else {
        r.sample_homogeneous(g, d)
    };
    (r, gens, f)
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    // Laplace expansion along the first row; n <= 4
    let mut s = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let t = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    s
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// `k x k` minors and the `k`-th factor is `d_k / d_{k-1}`. Stops at the
/// rank.
pub fn determinantal_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::from(1);
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| BigInt::from(m[i][j])).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push((&g / &prev).abs());
        prev = g;
    }
    out
}

/// A matrix of shape up to 4 x 4 with entries in [-9, 9].
pub fn small_matrix(g: &mut SuiteRng) -> Vec<Vec<i64>> {
    let (r, c) = (g.gen_range(1..=4), g.gen_range(1..=4));
    (0..r).map(|_| (0..c).map(|_| g.gen_range(-9..=9)).collect()).collect()
}

/// Integral homology `H_n` as (free rank, torsion coefficients > 1), read
/// off Smith forms of the differentials.
pub fn z_homology(c: &koszulkit::complexes::ChainComplex<koszulkit::arith::Integers>, n: i64) -> (usize, Vec<BigInt>) {
    let factors = |k: i64| -> Vec<BigInt> {
        let d = c.d(k);
        if d.rows() == 0 || d.cols() == 0 {
            return vec![];
        }
        let s = koszulkit::arith::smith_normal_form(&d).expect("Z is Euclidean");
        s.invariant_factors().into_iter().map(|x| x.abs()).collect()
    };
    let (out, inc) = (factors(n), factors(n + 1));
    let free = c.rank(n) - out.len() - inc.len();
    let one = BigInt::from(1);
    (free, inc.into_iter().filter(|x| *x != one).collect())
}

/// `z_homology` in every degree from `lo` to `hi`.
pub fn z_homology_table(
    c: &koszulkit::complexes::ChainComplex<koszulkit::arith::Integers>,
    lo: i64,
    hi: i64,
) -> Vec<(usize, Vec<BigInt>)> {
    (lo..=hi).map(|n| z_homology(c, n)).collect()
}
