//! The cone functor `C = Cone(id)` with its unit, multiplication and
//! symmetry, and the mapping cylinder built from it.

use super::{cone, cone_map, ChainComplex, ChainMap, Homotopy};
use crate::arith::{Matrix, Ring};
use crate::error::Result;

/// `(Cx, ι_x, r_x, σ_x)` together with the maps needed to state the identities.
#[derive(Clone, Debug)]
pub struct Bicomplicial<R: Ring> {
    pub x: ChainComplex<R>,
    pub cx: ChainComplex<R>,
    pub ccx: ChainComplex<R>,
    /// `ι_x: x -> Cx`
    pub iota: ChainMap<R>,
    /// `ι_{Cx}: Cx -> CCx`
    pub iota_c: ChainMap<R>,
    /// `C(ι_x): Cx -> CCx`
    pub c_iota: ChainMap<R>,
    /// `r_x: CCx -> Cx`
    pub r: ChainMap<R>,
    /// `σ_x: CCx -> CCx`
    pub sigma: ChainMap<R>,
}

/// `C` on morphisms: `C(g)_n = g_{n-1} ⊕ g_n`.
pub fn c_map<R: Ring>(g: &ChainMap<R>) -> Result<ChainMap<R>> {
    cone_map(
        &ChainMap::identity(&g.dom),
        &ChainMap::identity(&g.cod),
        g,
        g,
    )
}

fn unit<R: Ring>(x: &ChainComplex<R>, cx: &ChainComplex<R>) -> Result<ChainMap<R>> {
    let r = x.ring().clone();
    ChainMap::new(x.clone(), cx.clone(), |n| {
        Matrix::zeros(&r, x.rank(n - 1), x.rank(n)).vstack(&Matrix::identity(&r, x.rank(n)))
    })
}

pub fn bicomplicial_c<R: Ring>(x: &ChainComplex<R>) -> Result<Bicomplicial<R>> {
    let ring = x.ring().clone();
    let cx = cone(&ChainMap::identity(x))?;
    let ccx = cone(&ChainMap::identity(&cx))?;
    let iota = unit(x, &cx)?;
    let iota_c = unit(&cx, &ccx)?;
    let c_iota = c_map(&iota)?;
    // (CCx)_n = x_{n-2} ⊕ x_{n-1} ⊕ x_{n-1} ⊕ x_n
    let widths = |n: i64| [x.rank(n - 2), x.rank(n - 1), x.rank(n - 1), x.rank(n)];
    let id = |k: usize| Matrix::identity(&ring, k);
    let r = ChainMap::new(ccx.clone(), cx.clone(), |n| {
        let w = widths(n);
        let (a, b) = (id(w[1]), id(w[3]));
        Matrix::blocks(
            &ring,
            &[x.rank(n - 1), x.rank(n)],
            &w,
            &[&[None, Some(&a), Some(&a), None], &[None, None, None, Some(&b)]],
        )
    })?;
    let sigma = ChainMap::new(ccx.clone(), ccx.clone(), |n| {
        let w = widths(n);
        let (m, a, b) = (id(w[0]).neg(), id(w[1]), id(w[3]));
        Matrix::blocks(
            &ring,
            &w,
            &w,
            &[
                &[Some(&m), None, None, None],
                &[None, None, Some(&a), None],
                &[None, Some(&a), None, None],
                &[None, None, None, Some(&b)],
            ],
        )
    })?;
    Ok(Bicomplicial {
        x: x.clone(),
        cx,
        ccx,
        iota,
        iota_c,
        c_iota,
        r,
        sigma,
    })
}

impl<R: Ring> Bicomplicial<R> {
    /// `r C(ι) = r ι_C = id`, `σ C(ι) = ι_C`, `σσ = id`.
    pub fn identities_hold(&self) -> bool {
        let id_c = ChainMap::identity(&self.cx);
        let id_cc = ChainMap::identity(&self.ccx);
        let eq = |a: Result<ChainMap<R>>, b: &ChainMap<R>| a.map_or(false, |a| &a == b);
        eq(self.r.compose(&self.c_iota), &id_c)
            && eq(self.r.compose(&self.iota_c), &id_c)
            && eq(self.sigma.compose(&self.c_iota), &self.iota_c)
            && eq(self.sigma.compose(&self.sigma), &id_cc)
    }

    /// Every component of `ι_x` has a left inverse (the projection onto `x_n`).
    pub fn iota_split_injective(&self) -> bool {
        let x = &self.x;
        let r = x.ring();
        (x.low()..=x.high()).all(|n| {
            let p = Matrix::zeros(r, x.rank(n), x.rank(n - 1)).hstack(&Matrix::identity(r, x.rank(n)));
            p.mul(&self.iota.at(n)).is_identity()
        })
    }
}

/// Contraction of `Cx`: `h(a', a) = (-a, 0)` with `id = dh + hd`.
pub fn cone_contraction<R: Ring>(x: &ChainComplex<R>) -> Result<(ChainComplex<R>, Homotopy<R>)> {
    let cx = cone(&ChainMap::identity(x))?;
    let r = x.ring().clone();
    let h = Homotopy::new(&cx, &cx, |n| {
        let top = Matrix::zeros(&r, x.rank(n), x.rank(n - 1)).hstack(&Matrix::identity(&r, x.rank(n)).neg());
        top.vstack(&Matrix::zeros(&r, x.rank(n + 1), x.rank(n - 1) + x.rank(n)))
    })?;
    Ok((cx, h))
}

/// The morphism `H: Cx -> y` with `f - g = H ι_x` attached to a chain
/// homotopy `f - g = dh + hd`: `H(a', a) = -h a' + (f - g) a`.
pub fn c_homotopy<R: Ring>(f: &ChainMap<R>, g: &ChainMap<R>, h: &Homotopy<R>) -> Result<ChainMap<R>> {
    let (x, y) = (&f.dom, &f.cod);
    let cx = cone(&ChainMap::identity(x))?;
    let diff = f.sub(g)?;
    ChainMap::new(cx, y.clone(), |n| h.component(x, y, n - 1).neg().hstack(&diff.at(n)))
}

/// Read a chain homotopy back off `H: Cx -> y`: `h = -H|_{x[-1]}`.
pub fn chain_homotopy_from_c<R: Ring>(x: &ChainComplex<R>, big: &ChainMap<R>) -> Result<Homotopy<R>> {
    let y = &big.cod;
    Homotopy::new(x, y, |n| big.at(n + 1).submatrix(0, y.rank(n + 1), 0, x.rank(n)).neg())
}

/// `Cyl f = y ⊕ Cx` with its structure maps.
#[derive(Clone, Debug)]
pub struct Cylinder<R: Ring> {
    pub cyl: ChainComplex<R>,
    pub cone: ChainComplex<R>,
    /// `(f, -ι)^t: x -> Cyl f`
    pub j1: ChainMap<R>,
    /// `(id, 0)^t: y -> Cyl f`
    pub j2: ChainMap<R>,
    /// `(0, id)^t: Cx -> Cyl f`
    pub j3: ChainMap<R>,
    /// `(id, 0): Cyl f -> y`
    pub beta: ChainMap<R>,
    /// `η(b, (a', a)) = (a', b + f a): Cyl f -> Cone f`
    pub eta: ChainMap<R>,
    /// `j2 β - id = dH + Hd`
    pub homotopy: Homotopy<R>,
}

pub fn cylinder<R: Ring>(f: &ChainMap<R>) -> Result<Cylinder<R>> {
    let (x, y) = (&f.dom, &f.cod);
    let ring = x.ring().clone();
    let (cx, h) = cone_contraction(x)?;
    let cyl = y.direct_sum(&cx);
    let cn = cone(f)?;
    let id = |k: usize| Matrix::identity(&ring, k);
    let zero = |a: usize, b: usize| Matrix::zeros(&ring, a, b);
    let j1 = ChainMap::new(x.clone(), cyl.clone(), |n| {
        f.at(n)
            .vstack(&zero(x.rank(n - 1), x.rank(n)))
            .vstack(&id(x.rank(n)).neg())
    })?;
    let j2 = ChainMap::new(y.clone(), cyl.clone(), |n| {
        id(y.rank(n)).vstack(&zero(cx.rank(n), y.rank(n)))
    })?;
    let j3 = ChainMap::new(cx.clone(), cyl.clone(), |n| {
        zero(y.rank(n), cx.rank(n)).vstack(&id(cx.rank(n)))
    })?;
    let beta = ChainMap::new(cyl.clone(), y.clone(), |n| {
        id(y.rank(n)).hstack(&zero(y.rank(n), cx.rank(n)))
    })?;
    let eta = ChainMap::new(cyl.clone(), cn.clone(), |n| {
        let (yn, x1, xn) = (y.rank(n), x.rank(n - 1), x.rank(n));
        let (a, b) = (id(x1), id(yn));
        let fx = f.at(n);
        Matrix::blocks(&ring, &[x1, yn], &[yn, x1, xn], &[&[None, Some(&a), None], &[Some(&b), None, Some(&fx)]])
    })?;
    let homotopy = Homotopy::new(&cyl, &cyl, |n| {
        zero(y.rank(n + 1), y.rank(n)).block_diag(&h.component(&cx, &cx, n).neg())
    })?;
    Ok(Cylinder {
        cyl,
        cone: cn,
        j1,
        j2,
        j3,
        beta,
        eta,
        homotopy,
    })
}

impl<R: Ring> Cylinder<R> {
    /// In every degree, `t: Cyl -> x` and `s: Cone -> Cyl` with `t j1 = id`,
    /// `η s = id` and `j1 t + s η = id` exist; they are checked explicitly.
    pub fn degreewise_split_exact(&self) -> bool {
        let (x, y) = (&self.j1.dom, &self.j2.dom);
        let ring = x.ring();
        let (lo, hi) = (self.cyl.low().min(self.cone.low()), self.cyl.high().max(self.cone.high()));
        (lo..=hi).all(|n| {
            let (yn, x1, xn) = (y.rank(n), x.rank(n - 1), x.rank(n));
            // t(b, a', a) = -a
            let t = Matrix::zeros(ring, xn, yn + x1).hstack(&Matrix::identity(ring, xn).neg());
            // s(a', b) = (b, a', 0)
            let s = Matrix::blocks(
                ring,
                &[yn, x1, xn],
                &[x1, yn],
                &[
                    &[None, Some(&Matrix::identity(ring, yn))],
                    &[Some(&Matrix::identity(ring, x1)), None],
                    &[None, None],
                ],
            );
            let (j1, eta) = (self.j1.at(n), self.eta.at(n));
            t.mul(&j1).is_identity()
                && eta.mul(&s).is_identity()
                && eta.mul(&j1).is_zero()
                && j1.mul(&t).add(&s.mul(&eta)).is_identity()
        })
    }
}
