//! Random double complexes and outer morphisms for suites.

use rand::Rng as _;

use super::{DoubleComplex, DoubleMap};
use crate::arith::{ExactRing, Matrix, Ring};
use crate::complexes::{cone, ChainComplex, ChainMap};
use crate::error::Result;
use crate::random::{conjugate, inverse_of_conjugation, random_chain_map, random_complex, Sample, SuiteRng};

/// Size caps: rank per bidegree, outer length, inner length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleParams {
    pub max_rank: usize,
    pub max_outer: usize,
    pub max_inner: usize,
}

impl Default for DoubleParams {
    fn default() -> Self {
        DoubleParams {
            max_rank: 2,
            max_outer: 3,
            max_inner: 2,
        }
    }
}

fn inner<R: Sample + ExactRing>(ring: &R, rng: &mut SuiteRng, p: &DoubleParams, acyclic: bool) -> ChainComplex<R> {
    if acyclic {
        // the cone of an identity has rank 2 r, so pieces stay small
        let len = p.max_inner.saturating_sub(1);
        let x = random_complex(ring, rng, 0, len, 1, 1);
        cone(&ChainMap::identity(&x)).expect("cone of the identity")
    } else {
        random_complex(ring, rng, 0, p.max_inner, 1, 1)
    }
}

fn fits<R: Ring>(x: &DoubleComplex<R>, p: &DoubleParams) -> bool {
    let Some((a, b)) = x.support() else {
        return true;
    };
    let inner_ok = (a..=b).all(|k| {
        let e = x.entry(k);
        e.length() <= p.max_inner && (e.low()..=e.high()).all(|q| e.rank(q) <= p.max_rank)
    });
    inner_ok && (b - a) as usize <= p.max_outer
}

fn pieces<R: Sample + ExactRing>(ring: &R, rng: &mut SuiteRng, p: &DoubleParams, acyclic: bool) -> DoubleComplex<R> {
    let base = rng.gen_range(-1..=1);
    let mut x = DoubleComplex::zero(ring);
    for _ in 0..rng.gen_range(1..=3) {
        let top = base + rng.gen_range(0..=p.max_outer as i64);
        let c1 = inner(ring, rng, p, acyclic);
        let piece = if top > base && rng.gen_bool(0.6) {
            let (c2, f) = if rng.gen_bool(0.5) {
                let f = random_chain_map(&c1, &c1, rng, 1);
                (c1.clone(), f)
            } else {
                let c2 = inner(ring, rng, p, acyclic);
                let f = random_chain_map(&c1, &c2, rng, 1);
                (c2, f)
            };
            DoubleComplex::new(ring, top - 1, vec![c2, c1], vec![f]).expect("two-term piece")
        } else {
            DoubleComplex::concentrated(&c1, top)
        };
        let y = x.direct_sum(&piece);
        if fits(&y, p) {
            x = y;
        }
    }
    x
}

/// Change basis in every entry. Returns the new object and the isomorphism
/// from the old one.
pub fn conjugate_double<R: Sample + ExactRing>(
    x: &DoubleComplex<R>,
    rng: &mut SuiteRng,
) -> Result<(DoubleComplex<R>, DoubleMap<R>)> {
    let (lo, hi) = (x.low(), x.high());
    let mut ys = Vec::new();
    let mut isos = Vec::new();
    for p in lo..=hi {
        let (y, iso) = conjugate(&x.entry(p), rng);
        ys.push(y);
        isos.push(iso);
    }
    let get = |p: i64| isos[(p - lo) as usize].clone();
    let maps = (lo + 1..=hi)
        .map(|p| {
            let inv = inverse_of_conjugation(&get(p));
            get(p - 1).compose(&x.d(p))?.compose(&inv)
        })
        .collect::<Result<Vec<_>>>()?;
    let y = if hi < lo {
        DoubleComplex::zero(x.ring())
    } else {
        DoubleComplex::new(x.ring(), lo, ys, maps)?
    };
    let phi = DoubleMap::new(x.clone(), y.clone(), |p| {
        if p < lo || p > hi {
            Ok(ChainMap::identity(&x.entry(p)))
        } else {
            Ok(get(p))
        }
    })?;
    Ok((y, phi))
}

fn inverse_double<R: ExactRing>(phi: &DoubleMap<R>) -> Result<DoubleMap<R>> {
    DoubleMap::new(phi.cod.clone(), phi.dom.clone(), |p| Ok(inverse_of_conjugation(&phi.at(p))))
}

/// A sum of single entries and two-term pieces `c1 -> c2` with a random
/// chain map, conjugated entrywise. With `acyclic`, every entry is acyclic.
pub fn random_double_complex<R: Sample + ExactRing>(
    ring: &R,
    rng: &mut SuiteRng,
    params: &DoubleParams,
    acyclic: bool,
) -> DoubleComplex<R> {
    let x = pieces(ring, rng, params, acyclic);
    conjugate_double(&x, rng).expect("conjugation of a valid object").0
}

fn inclusion<R: ExactRing>(x: &DoubleComplex<R>, z: &DoubleComplex<R>, c: &R::Elem) -> Result<DoubleMap<R>> {
    let xz = x.direct_sum(z);
    let r = x.ring().clone();
    DoubleMap::new(x.clone(), xz.clone(), |p| {
        let (a, b) = (x.entry(p), z.entry(p));
        ChainMap::new(a.clone(), xz.entry(p), |q| {
            Matrix::scalar(&r, a.rank(q), c.clone()).vstack(&Matrix::zeros(&r, b.rank(q), a.rank(q)))
        })
    })
}

fn projection<R: ExactRing>(x: &DoubleComplex<R>, z: &DoubleComplex<R>, c: &R::Elem) -> Result<DoubleMap<R>> {
    let xz = x.direct_sum(z);
    let r = x.ring().clone();
    DoubleMap::new(xz.clone(), x.clone(), |p| {
        let (a, b) = (x.entry(p), z.entry(p));
        ChainMap::new(xz.entry(p), a.clone(), |q| {
            Matrix::scalar(&r, a.rank(q), c.clone()).hstack(&Matrix::zeros(&r, a.rank(q), b.rank(q)))
        })
    })
}

/// A random map of double complexes, conjugated at both ends. With
/// `levelwise`, every component is an inner quasi-isomorphism: a unit
/// multiple of an inclusion or projection against an object with acyclic
/// entries.
pub fn random_outer_morphism<R: Sample + ExactRing>(
    ring: &R,
    rng: &mut SuiteRng,
    params: &DoubleParams,
    levelwise: bool,
) -> Result<DoubleMap<R>> {
    let x = random_double_complex(ring, rng, params, false);
    let f = if levelwise {
        let z = random_double_complex(ring, rng, params, true);
        let c = ring.sample_unit(rng);
        if rng.gen_bool(0.5) {
            inclusion(&x, &z, &c)?
        } else {
            projection(&x, &z, &c)?
        }
    } else {
        let z = random_double_complex(ring, rng, params, false);
        let c = ring.from_i64(rng.gen_range(-2..=2));
        match rng.gen_range(0..4) {
            0 => inclusion(&x, &z, &c)?,
            1 => projection(&x, &z, &c)?,
            2 => DoubleMap::zero(&x, &z),
            _ => {
                let id = DoubleMap::identity(&x);
                DoubleMap::new(x.clone(), x.clone(), |p| {
                    Ok(ChainMap::new(x.entry(p), x.entry(p), |q| id.at(p).at(q).scale(&c))?)
                })?
            }
        }
    };
    let (_, a) = conjugate_double(&f.dom, rng)?;
    let (_, b) = conjugate_double(&f.cod, rng)?;
    b.compose(&f)?.compose(&inverse_double(&a)?)
}
