//! Column Hermite form over the integers: `M * U = H` with `U` unimodular.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::Matrix;
use super::ring::Integers;

pub struct Hermite {
    pub h: Matrix<Integers>,
    pub u: Matrix<Integers>,
    /// Pivot row of each of the first `rank` columns, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn col_combine(m: &mut Matrix<Integers>, c: usize, k: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
    // (col c, col k) <- (s*c + t*k, u*c + v*k)
    for i in 0..m.rows() {
        let a = m.get(i, c).clone();
        let b = m.get(i, k).clone();
        if a.is_zero() && b.is_zero() {
            continue;
        }
        m.set(i, c, s * &a + t * &b);
        m.set(i, k, u * &a + v * &b);
    }
}

pub fn hermite(m: &Matrix<Integers>) -> Hermite {
    let mut h = m.clone();
    let n = m.cols();
    let mut u = Matrix::identity(&Integers, n);
    let mut pivots = Vec::new();
    let mut c = 0;
    for i in 0..m.rows() {
        if c == n {
            break;
        }
        for k in c + 1..n {
            if h.get(i, k).is_zero() {
                continue;
            }
            let a = h.get(i, c).clone();
            let b = h.get(i, k).clone();
            let (g, s, t) = ext_gcd(&a, &b);
            let (ag, bg) = (&a / &g, &b / &g);
            col_combine(&mut h, c, k, &s, &t, &-bg.clone(), &ag);
            col_combine(&mut u, c, k, &s, &t, &-bg, &ag);
        }
        if h.get(i, c).is_zero() {
            continue;
        }
        if h.get(i, c).is_negative() {
            for mat in [&mut h, &mut u] {
                for r in 0..mat.rows() {
                    let v = -mat.get(r, c);
                    mat.set(r, c, v);
                }
            }
        }
        // reduce earlier columns in this row into [0, pivot)
        let p = h.get(i, c).clone();
        for k in 0..c {
            let q = h.get(i, k).div_floor(&p);
            if q.is_zero() {
                continue;
            }
            for r in 0..h.rows() {
                let v = h.get(r, k) - &q * h.get(r, c);
                h.set(r, k, v);
            }
            for r in 0..n {
                let v = u.get(r, k) - &q * u.get(r, c);
                u.set(r, k, v);
            }
        }
        pivots.push(i);
        c += 1;
    }
    Hermite { h, u, pivots }
}

impl Hermite {
    /// Solve `H y = v`, returning `y` (length rank) or the residual when unsolvable.
    pub fn solve(&self, v: &[BigInt]) -> Result<Vec<BigInt>, Vec<BigInt>> {
        let mut r = v.to_vec();
        let mut y = Vec::with_capacity(self.rank());
        let mut row = 0;
        for (j, &p) in self.pivots.iter().enumerate() {
            while row < p {
                if !r[row].is_zero() {
                    return Err(r);
                }
                row += 1;
            }
            let (q, rem) = r[p].div_mod_floor(self.h.get(p, j));
            if !rem.is_zero() {
                return Err(r);
            }
            if !q.is_zero() {
                for (i, ri) in r.iter_mut().enumerate().skip(p) {
                    *ri -= &q * self.h.get(i, j);
                }
            }
            y.push(q);
            row = p + 1;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return Err(r);
        }
        Ok(y)
    }

    /// Canonical representative of `v` modulo the column span.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut r = v.to_vec();
        for (j, &p) in self.pivots.iter().enumerate() {
            let q = r[p].div_floor(self.h.get(p, j));
            if !q.is_zero() {
                for (i, ri) in r.iter_mut().enumerate().skip(p) {
                    *ri -= &q * self.h.get(i, j);
                }
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: usize, cols: usize, v: &[i64]) -> Matrix<Integers> {
        Matrix::from_vec(&Integers, rows, cols, v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn hermite_kernel_and_solve() {
        let m = z(2, 3, &[2, 4, 6, 1, 3, 5]);
        let hf = hermite(&m);
        assert_eq!(m.mul(&hf.u), hf.h);
        assert_eq!(hf.u.det().abs(), BigInt::from(1));
        assert_eq!(hf.rank(), 2);
        let ker = hf.u.select_cols(&[2]);
        assert!(m.mul(&ker).is_zero());
        let v = vec![BigInt::from(2), BigInt::from(1)];
        assert!(hf.solve(&v).is_ok());
        let w = vec![BigInt::from(1), BigInt::from(0)];
        assert!(hf.solve(&w).is_err());
    }
}
