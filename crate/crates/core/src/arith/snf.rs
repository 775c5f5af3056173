//! Smith normal form over Euclidean domains (the integers, k[x], k).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::matrix::Matrix;
use super::poly::{Poly, PolyRing};
use super::ring::{Field, Integers, Ring};
use crate::error::{Error, Result};

pub trait Euclidean: Ring {
    /// Fails for rings that are not Euclidean (multivariate polynomial rings).
    fn check_euclidean(&self) -> Result<()>;
    /// Euclidean size; only compared between nonzero elements.
    fn size(&self, a: &Self::Elem) -> u64;
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// Unit `u` such that `u * a` is the normalized associate of `a`.
    fn normalizing_unit(&self, a: &Self::Elem) -> Self::Elem;
}

impl Euclidean for Integers {
    fn check_euclidean(&self) -> Result<()> {
        Ok(())
    }
    fn size(&self, a: &BigInt) -> u64 {
        a.bits()
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        // symmetric remainder keeps entries small
        let (mut q, mut r) = a.div_mod_floor(b);
        let twice: BigInt = &r * 2;
        // the floored remainder has the sign of b
        if twice.abs() > b.abs() {
            q += 1;
            r -= b;
        }
        (q, r)
    }
    fn normalizing_unit(&self, a: &BigInt) -> BigInt {
        if a.is_negative() {
            BigInt::from(-1)
        } else {
            BigInt::from(1)
        }
    }
}

impl<F: Field> Euclidean for PolyRing<F> {
    fn check_euclidean(&self) -> Result<()> {
        if self.nvars() > 1 {
            return Err(Error::NonEuclidean(format!(
                "polynomial ring in {} variables",
                self.nvars()
            )));
        }
        Ok(())
    }
    fn size(&self, a: &Poly<F::Elem>) -> u64 {
        self.total_degree(a).unwrap_or(0) as u64
    }
    fn div_rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
        self.univariate_div_rem(a, b)
    }
    fn normalizing_unit(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.lead() {
            Some((_, c)) => self.constant(self.field.inv(c)),
            None => self.one(),
        }
    }
}

pub struct Smith<R: Ring> {
    pub u: Matrix<R>,
    pub d: Matrix<R>,
    pub v: Matrix<R>,
}

impl<R: Ring> Smith<R> {
    pub fn diagonal(&self) -> Vec<R::Elem> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Diagonal entries that are nonzero.
    pub fn invariant_factors(&self) -> Vec<R::Elem> {
        let r = self.d.ring();
        self.diagonal().into_iter().filter(|x| !r.is_zero(x)).collect()
    }
}

/// `D = U * M * V` diagonal with `d_i | d_{i+1}`, `U`, `V` invertible.
pub fn smith_normal_form<R: Euclidean>(m: &Matrix<R>) -> Result<Smith<R>> {
    let ring = m.ring().clone();
    ring.check_euclidean()?;
    let (rows, cols) = m.shape();
    let mut d = m.clone();
    let mut u = Matrix::identity(&ring, rows);
    let mut v = Matrix::identity(&ring, cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize, u64)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if !ring.is_zero(x) {
                        let s = ring.size(x);
                        if best.map_or(true, |b| s < b.2) {
                            best = Some((i, j, s));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return Ok(Smith { u, d, v });
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let piv = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if ring.is_zero(d.get(i, t)) {
                    continue;
                }
                let (q, r) = ring.div_rem(d.get(i, t), &piv);
                let nq = ring.neg(&q);
                d.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
                clean &= ring.is_zero(&r);
            }
            for j in t + 1..cols {
                if ring.is_zero(d.get(t, j)) {
                    continue;
                }
                let (q, r) = ring.div_rem(d.get(t, j), &piv);
                let nq = ring.neg(&q);
                d.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
                clean &= ring.is_zero(&r);
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| {
                    let (_, r) = ring.div_rem(d.get(i, j), &piv);
                    !ring.is_zero(&r)
                })
            });
            match bad {
                Some(i) => {
                    let one = ring.one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        let c = ring.normalizing_unit(d.get(t, t));
        if !ring.is_one(&c) {
            d.scale_row(t, &c);
            u.scale_row(t, &c);
        }
    }
    Ok(Smith { u, d, v })
}
