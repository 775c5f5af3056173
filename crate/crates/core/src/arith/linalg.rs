//! Submodule spans of free modules: membership, lifting, syzygies.
//!
//! Polynomial rings (including fields as the zero-variable case) use the
//! module Groebner engine on `[M; I]`; the integers use column Hermite form.

use std::collections::VecDeque;

use num_bigint::BigInt;

use super::gb::{index_by_pos, Engine, Vector};
use super::hnf::{hermite, Hermite};
use super::matrix::Matrix;
use super::poly::{Poly, PolyRing};
use super::ring::{Field, Integers, Ring};

/// A ring with effective linear algebra over finitely generated submodules.
pub trait LinearRing: Ring {
    type Span: Span<Self>;

    /// The submodule generated by the columns of `gens`. With `tracked`, lifts
    /// and syzygies are available.
    fn span(&self, gens: &Matrix<Self>, tracked: bool) -> Self::Span;
}

pub trait Span<R: Ring>: Send + Sync {
    fn ambient(&self) -> usize;
    fn ngens(&self) -> usize;
    fn contains(&self, v: &[R::Elem]) -> bool;
    /// Canonical representative modulo the span.
    fn reduce(&self, v: &[R::Elem]) -> Vec<R::Elem>;
    /// Coefficients `c` with `gens * c = v`. Requires a tracked span.
    fn lift(&self, v: &[R::Elem]) -> Option<Vec<R::Elem>>;
    /// Generators of the relations among the generators. Requires a tracked span.
    fn syzygies(&self) -> Matrix<R>;
}

pub fn contains_all<R: LinearRing>(s: &R::Span, m: &Matrix<R>) -> bool {
    (0..m.cols()).all(|j| s.contains(&m.col(j)))
}

/// Columns generating the kernel of `m`.
pub fn kernel<R: LinearRing>(m: &Matrix<R>) -> Matrix<R> {
    m.ring().span(m, true).syzygies()
}

/// Solve `m * x = v`.
pub fn solve<R: LinearRing>(m: &Matrix<R>, v: &[R::Elem]) -> Option<Vec<R::Elem>> {
    m.ring().span(m, true).lift(v)
}

/// Solve `m * X = b` column by column.
pub fn solve_matrix<R: LinearRing>(m: &Matrix<R>, b: &Matrix<R>) -> Option<Matrix<R>> {
    let s = m.ring().span(m, true);
    let cols: Option<Vec<_>> = (0..b.cols()).map(|j| s.lift(&b.col(j))).collect();
    Some(Matrix::from_cols(m.ring(), m.cols(), &cols?))
}

// ---------------------------------------------------------------------------
// polynomial rings

pub struct PolySpan<F: Field> {
    ring: PolyRing<F>,
    weights: Vec<i64>,
    ambient: usize,
    ngens: usize,
    tracked: bool,
    basis: Vec<Vector<F::Elem>>,
    by_pos: Vec<Vec<usize>>,
}

/// Row degrees making every nonzero entry homogeneous of degree
/// `col_deg - row_deg`, if such a grading exists. Rows with a prescribed
/// degree keep it.
pub fn infer_weights<R: Ring>(
    m: &Matrix<R>,
    fixed_rows: Option<&[i64]>,
) -> Option<(Vec<i64>, Vec<i64>)> {
    let r = m.ring();
    let (rows, cols) = m.shape();
    let mut row_w: Vec<Option<i64>> = match fixed_rows {
        Some(f) => f.iter().map(|&x| Some(x)).collect(),
        None => vec![None; rows],
    };
    let mut col_w: Vec<Option<i64>> = vec![None; cols];
    let mut deg = vec![None; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let e = m.get(i, j);
            if !r.is_zero(e) {
                deg[i * cols + j] = Some(r.homogeneous_degree(e)?);
            }
        }
    }
    let mut seen = vec![false; rows];
    let starts: Vec<usize> = (0..rows)
        .filter(|&i| row_w[i].is_some())
        .chain(0..rows)
        .collect();
    for start in starts {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        row_w[start].get_or_insert(0);
        let mut q = VecDeque::from([(true, start)]);
        while let Some((is_row, k)) = q.pop_front() {
            if is_row {
                let w = row_w[k].unwrap();
                for j in 0..cols {
                    if let Some(d) = deg[k * cols + j] {
                        match col_w[j] {
                            None => {
                                col_w[j] = Some(w + d);
                                q.push_back((false, j));
                            }
                            Some(c) if c != w + d => return None,
                            _ => {}
                        }
                    }
                }
            } else {
                let w = col_w[k].unwrap();
                for i in 0..rows {
                    if let Some(d) = deg[i * cols + k] {
                        match row_w[i] {
                            Some(c) if seen[i] && c != w - d => return None,
                            Some(c) if !seen[i] => {
                                if c != w - d {
                                    return None;
                                }
                                seen[i] = true;
                                q.push_back((true, i));
                            }
                            None => {
                                row_w[i] = Some(w - d);
                                seen[i] = true;
                                q.push_back((true, i));
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    Some((
        row_w.into_iter().map(|w| w.unwrap_or(0)).collect(),
        col_w.into_iter().map(|w| w.unwrap_or(0)).collect(),
    ))
}

impl<F: Field> PolySpan<F> {
    pub fn new(gens: &Matrix<PolyRing<F>>, tracked: bool) -> Self {
        let ring = gens.ring().clone();
        let (m, s) = gens.shape();
        let mut weights = match infer_weights(gens, None) {
            Some((rw, cw)) => {
                let mut w = rw;
                if tracked {
                    w.extend(cw);
                }
                w
            }
            None => {
                let mut w = vec![0; m];
                if tracked {
                    for j in 0..s {
                        let d = (0..m)
                            .filter_map(|i| ring.total_degree(gens.get(i, j)))
                            .max()
                            .unwrap_or(0);
                        w.push(d);
                    }
                }
                w
            }
        };
        weights.shrink_to_fit();
        let basis = {
            let e = Engine::new(&ring, &weights);
            let mut vs = Vec::with_capacity(s);
            for j in 0..s {
                let mut v = e.from_dense(&gens.col(j), 0);
                if tracked {
                    v.push(super::gb::Term {
                        pos: (m + j) as u32,
                        mono: super::poly::Monomial::one(ring.nvars()),
                        coeff: ring.field.one(),
                    });
                }
                vs.push(v);
            }
            let ideal_mode = m == 1 && !tracked;
            e.groebner(vs, ideal_mode)
        };
        let by_pos = index_by_pos(&basis);
        PolySpan {
            ring,
            weights,
            ambient: m,
            ngens: s,
            tracked,
            basis,
            by_pos,
        }
    }

    fn engine(&self) -> Engine<'_, F> {
        Engine::new(&self.ring, &self.weights)
    }

    /// Elements of the reduced basis lying in the ambient module.
    pub fn basis_columns(&self) -> Vec<Vec<Poly<F::Elem>>> {
        let e = self.engine();
        self.basis
            .iter()
            .filter(|g| (g[0].pos as usize) < self.ambient)
            .map(|g| e.to_dense(g, 0, self.ambient))
            .collect()
    }

    fn top_reduce(&self, v: &[Poly<F::Elem>]) -> Vector<F::Elem> {
        let e = self.engine();
        e.reduce(
            e.from_dense(v, 0),
            &self.basis,
            &self.by_pos,
            false,
            self.ambient as u32,
            None,
        )
    }
}

impl<F: Field> Span<PolyRing<F>> for PolySpan<F> {
    fn ambient(&self) -> usize {
        self.ambient
    }
    fn ngens(&self) -> usize {
        self.ngens
    }
    fn contains(&self, v: &[Poly<F::Elem>]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length");
        let r = self.top_reduce(v);
        r.first().map_or(true, |t| t.pos as usize >= self.ambient)
    }
    fn reduce(&self, v: &[Poly<F::Elem>]) -> Vec<Poly<F::Elem>> {
        let e = self.engine();
        let r = e.reduce(
            e.from_dense(v, 0),
            &self.basis,
            &self.by_pos,
            true,
            self.ambient as u32,
            None,
        );
        e.to_dense(&r, 0, self.ambient)
    }
    fn lift(&self, v: &[Poly<F::Elem>]) -> Option<Vec<Poly<F::Elem>>> {
        assert!(self.tracked, "lift needs a tracked span");
        let r = self.top_reduce(v);
        if r.first().is_some_and(|t| (t.pos as usize) < self.ambient) {
            return None;
        }
        let e = self.engine();
        let b = e.to_dense(&r, self.ambient, self.ngens);
        Some(b.iter().map(|p| self.ring.neg(p)).collect())
    }
    fn syzygies(&self) -> Matrix<PolyRing<F>> {
        assert!(self.tracked, "syzygies need a tracked span");
        let e = self.engine();
        let cols: Vec<_> = self
            .basis
            .iter()
            .filter(|g| g[0].pos as usize >= self.ambient)
            .map(|g| e.to_dense(g, self.ambient, self.ngens))
            .collect();
        Matrix::from_cols(&self.ring, self.ngens, &cols)
    }
}

impl<F: Field> LinearRing for PolyRing<F> {
    type Span = PolySpan<F>;
    fn span(&self, gens: &Matrix<Self>, tracked: bool) -> PolySpan<F> {
        PolySpan::new(gens, tracked)
    }
}

// ---------------------------------------------------------------------------
// integers

pub struct IntSpan {
    ambient: usize,
    ngens: usize,
    hf: Hermite,
}

impl Span<Integers> for IntSpan {
    fn ambient(&self) -> usize {
        self.ambient
    }
    fn ngens(&self) -> usize {
        self.ngens
    }
    fn contains(&self, v: &[BigInt]) -> bool {
        self.hf.solve(v).is_ok()
    }
    fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.hf.reduce(v)
    }
    fn lift(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.hf.solve(v).ok()?;
        let k = y.len();
        let u = self.hf.u.submatrix(0, self.ngens, 0, k);
        Some(u.apply(&y))
    }
    fn syzygies(&self) -> Matrix<Integers> {
        let k = self.hf.rank();
        self.hf.u.submatrix(0, self.ngens, k, self.ngens - k)
    }
}

impl LinearRing for Integers {
    type Span = IntSpan;
    fn span(&self, gens: &Matrix<Self>, _tracked: bool) -> IntSpan {
        IntSpan {
            ambient: gens.rows(),
            ngens: gens.cols(),
            hf: hermite(gens),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::{MonomialOrder, Rationals};

    fn ring() -> PolyRing<Rationals> {
        PolyRing::new(Rationals, vec!["x".into(), "y".into()], MonomialOrder::GRevLex).unwrap()
    }

    fn mat(r: &PolyRing<Rationals>, rows: usize, cols: usize, s: &[&str]) -> Matrix<PolyRing<Rationals>> {
        Matrix::from_vec(r, rows, cols, s.iter().map(|t| r.parse_elem(t).unwrap()).collect())
    }

    #[test]
    fn koszul_syzygy() {
        let r = ring();
        let m = mat(&r, 1, 2, &["x", "y"]);
        let k = kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        let s = r.span(&k, false);
        assert!(s.contains(&[r.parse_elem("y").unwrap(), r.parse_elem("-x").unwrap()]));
    }

    #[test]
    fn lift_reproduces_vector() {
        let r = ring();
        let m = mat(&r, 2, 2, &["x", "y^2", "0", "x*y"]);
        let v = vec![r.parse_elem("x^2 + x*y^2").unwrap(), r.parse_elem("x^2*y").unwrap()];
        let c = solve(&m, &v).unwrap();
        assert_eq!(m.apply(&c), v);
        assert!(solve(&m, &[r.parse_elem("1").unwrap(), r.zero()]).is_none());
    }

    #[test]
    fn weights_inferred_for_graded_maps() {
        let r = ring();
        let m = mat(&r, 2, 2, &["x", "y^2", "1", "y"]);
        let (rw, cw) = infer_weights(&m, None).unwrap();
        assert_eq!(cw[0] - rw[0], 1);
        assert_eq!(cw[1] - rw[1], 1);
        assert_eq!(cw[1] - rw[0], 2);
        assert!(infer_weights(&mat(&r, 1, 1, &["x + 1"]), None).is_none());
    }

    #[test]
    fn integer_span() {
        let m = Matrix::from_vec(
            &Integers,
            2,
            2,
            [2, 0, 0, 3].iter().map(|&x| BigInt::from(x)).collect(),
        );
        let s = Integers.span(&m, true);
        assert!(s.contains(&[BigInt::from(4), BigInt::from(9)]));
        assert!(!s.contains(&[BigInt::from(1), BigInt::from(0)]));
        assert_eq!(s.syzygies().cols(), 0);
    }
}
