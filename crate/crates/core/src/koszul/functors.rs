//! Extension, restriction and homology functors between cube categories.

use crate::arith::{ExactRing, Matrix};
use crate::cubes::{h0_in_order, members, Cube, DirectionSet, Subset};
use crate::error::{Error, Result};

/// `ext_W(x)`: append the directions `W` with identity edges.
pub fn ext_functor<R: ExactRing>(x: &Cube<R>, w: &[String]) -> Result<Cube<R>> {
    if w.is_empty() {
        return Err(Error::Invalid("extension along an empty set".into()));
    }
    let mut labels = x.dirs().labels().to_vec();
    labels.extend(w.iter().cloned());
    let dirs = DirectionSet::new(labels)?;
    let n = x.dim();
    let low = x.dirs().full();
    let vs = dirs.subsets().map(|t| x.vertex(t & low).clone()).collect();
    Cube::unchecked(x.ring(), dirs, vs, |t, k| {
        if k < n {
            x.boundary(t & low, k).clone()
        } else {
            Matrix::identity(x.ring(), x.rank(t & low))
        }
    })
}

fn split<R: ExactRing>(x: &Cube<R>, w: &[String]) -> Result<(Subset, Vec<usize>)> {
    if w.is_empty() {
        return Err(Error::Invalid("empty direction set".into()));
    }
    let wm = x.dirs().mask_of(w)?;
    let keep = (0..x.dim()).filter(|i| wm >> i & 1 == 0).collect();
    Ok((wm, keep))
}

/// `res^j_W(x)`: the face where every `W`-coordinate equals `j`.
pub fn res_functor<R: ExactRing>(x: &Cube<R>, w: &[String], j: bool) -> Result<Cube<R>> {
    let (wm, keep) = split(x, w)?;
    let dirs = DirectionSet::new(keep.iter().map(|&i| x.dirs().labels()[i].clone()).collect())?;
    let lift = |m: Subset| -> Subset {
        let base: Subset = members(m).into_iter().map(|l| 1 << keep[l]).sum();
        if j {
            base | wm
        } else {
            base
        }
    };
    let vs = dirs.subsets().map(|m| x.vertex(lift(m)).clone()).collect();
    Cube::unchecked(x.ring(), dirs, vs, |m, l| x.boundary(lift(m), keep[l]).clone())
}

/// `H^W(x)`: iterated direction-wise cokernels over `W` in the given order.
pub fn h_functor<R: ExactRing>(x: &Cube<R>, w: &[String]) -> Result<Cube<R>> {
    split(x, w)?;
    h0_in_order(x, w)
}
