//! Projective dimension: minimal graded free resolutions over multivariate
//! rings, Smith form over principal ideal domains.

use super::{is_free_by_smith, relation_degrees, PresentedModule};
use crate::arith::linalg::{infer_weights, kernel};
use crate::arith::{ExactRing, Matrix, Span};
use crate::error::{Error, Result};

/// Remove generators killed by a unit relation, keeping homogeneity.
fn prune_units<R: ExactRing>(mut rel: Matrix<R>, mut deg: Vec<i64>) -> (Matrix<R>, Vec<i64>) {
    let r = rel.ring().clone();
    'outer: loop {
        for i in 0..rel.rows() {
            for j in 0..rel.cols() {
                let Some(inv) = r.unit_inverse(rel.get(i, j)) else {
                    continue;
                };
                for k in 0..rel.cols() {
                    if k == j || r.is_zero(rel.get(i, k)) {
                        continue;
                    }
                    let c = r.neg(&r.mul(rel.get(i, k), &inv));
                    rel.add_col_multiple(k, j, &c);
                }
                let rows: Vec<usize> = (0..rel.rows()).filter(|&x| x != i).collect();
                let cols: Vec<usize> = (0..rel.cols()).filter(|&x| x != j).collect();
                rel = rel.select_rows(&rows).select_cols(&cols);
                deg.remove(i);
                continue 'outer;
            }
        }
        return (rel, deg);
    }
}

/// A minimal generating subset of the columns, chosen greedily by degree.
fn minimal_columns<R: ExactRing>(m: &Matrix<R>, col_deg: &[i64]) -> (Matrix<R>, Vec<i64>) {
    let r = m.ring();
    let mut order: Vec<usize> = (0..m.cols())
        .filter(|&j| !m.col(j).iter().all(|x| r.is_zero(x)))
        .collect();
    order.sort_by_key(|&j| col_deg[j]);
    let mut kept: Vec<usize> = Vec::new();
    for j in order {
        if !kept.is_empty() {
            let s = r.span(&m.select_cols(&kept), false);
            if s.contains(&m.col(j)) {
                continue;
            }
        }
        kept.push(j);
    }
    let degs = kept.iter().map(|&j| col_deg[j]).collect();
    (m.select_cols(&kept), degs)
}

/// Length of a minimal graded free resolution, computed up to `limit` steps.
/// `None` for the zero module; `Some(limit + 1)` when longer than `limit`.
fn graded_pd<R: ExactRing>(m: &PresentedModule<R>, limit: usize) -> Result<Option<usize>> {
    let (rows, cols) = relation_degrees(m).ok_or_else(|| {
        Error::Unsupported("projective dimension of an ungraded module over a multivariate ring".into())
    })?;
    let (rel, row_deg) = prune_units(m.relations().clone(), rows);
    if rel.rows() == 0 {
        return Ok(None);
    }
    // column degrees survive unit pruning for the columns that remain
    let (_, col_deg) = infer_weights(&rel, Some(&row_deg)).unwrap_or((row_deg.clone(), cols));
    let (mut cur, mut cur_deg) = minimal_columns(&rel, &col_deg);
    let mut i = 0;
    while cur.cols() > 0 {
        if i >= limit {
            return Ok(Some(limit + 1));
        }
        let k = kernel(&cur);
        let (_, kdeg) = infer_weights(&k, Some(&cur_deg))
            .ok_or_else(|| Error::Verification("syzygies lost homogeneity".into()))?;
        (cur, cur_deg) = minimal_columns(&k, &kdeg);
        i += 1;
    }
    Ok(Some(i))
}

/// Projective dimension; `None` for the zero module.
pub fn projective_dimension<R: ExactRing>(m: &PresentedModule<R>) -> Result<Option<usize>> {
    let r = m.ring();
    if r.is_multivariate() {
        return graded_pd(m, usize::MAX);
    }
    if m.is_zero() {
        return Ok(None);
    }
    if r.is_field() {
        return Ok(Some(0));
    }
    Ok(Some(if is_free_by_smith(m)? { 0 } else { 1 }))
}

pub fn pd_at_most<R: ExactRing>(m: &PresentedModule<R>, p: usize) -> Result<bool> {
    let r = m.ring();
    if r.is_multivariate() {
        // Hilbert's syzygy theorem: graded modules over k[x_1..x_n] have pd <= n
        if p >= r.nvars() && relation_degrees(m).is_some() {
            return Ok(true);
        }
        return Ok(match graded_pd(m, p)? {
            None => true,
            Some(d) => d <= p,
        });
    }
    Ok(projective_dimension(m)?.map_or(true, |d| d <= p))
}
