//! Bounded chain complexes of free modules, chain maps, cones, cylinders and
//! the bicomplicial structure on them.

use std::fmt;

use crate::arith::linalg::{contains_all, kernel, solve};
use crate::arith::{ExactRing, Matrix, Ring};
use crate::error::{Error, Result};
use crate::fpmodules::{homology_pair, FpMap, PresentedModule};

mod bicomplicial;
mod mutation;

pub use bicomplicial::{
    bicomplicial_c, c_homotopy, c_map, chain_homotopy_from_c, cone_contraction, cylinder, Bicomplicial,
    Cylinder,
};
pub use mutation::{active_mutation, with_mutation, Mutation};

/// A bounded complex of free modules. `d(n)` maps degree `n` to degree `n - 1`.
#[derive(Clone)]
pub struct ChainComplex<R: Ring> {
    ring: R,
    low: i64,
    ranks: Vec<usize>,
    diffs: Vec<Matrix<R>>,
}

impl<R: Ring> fmt::Debug for ChainComplex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "complex[")?;
        for n in (self.low..=self.high()).rev() {
            write!(f, " {}:{} {}", n, self.rank(n), self.d(n).to_text())?;
        }
        write!(f, " ]")
    }
}

impl<R: Ring> PartialEq for ChainComplex<R> {
    fn eq(&self, o: &Self) -> bool {
        if self.ring != o.ring {
            return false;
        }
        let lo = self.low.min(o.low);
        let hi = self.high().max(o.high());
        (lo..=hi).all(|n| self.rank(n) == o.rank(n) && self.d(n) == o.d(n))
    }
}

impl<R: Ring> ChainComplex<R> {
    /// `diffs[i]` is the differential leaving degree `low + i`.
    pub fn new(ring: &R, low: i64, ranks: Vec<usize>, diffs: Vec<Matrix<R>>) -> Result<Self> {
        if ranks.len() != diffs.len() {
            return Err(Error::Dimension(format!(
                "{} modules but {} differentials",
                ranks.len(),
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            let below = if i == 0 { 0 } else { ranks[i - 1] };
            if d.shape() != (below, ranks[i]) {
                return Err(Error::Dimension(format!(
                    "differential in degree {} is {}x{}, expected {}x{}",
                    low + i as i64,
                    d.rows(),
                    d.cols(),
                    below,
                    ranks[i]
                )));
            }
        }
        for i in 1..diffs.len() {
            if !diffs[i - 1].mul(&diffs[i]).is_zero() {
                return Err(Error::Invalid(format!(
                    "d∘d is not zero at degree {}",
                    low + i as i64
                )));
            }
        }
        Ok(ChainComplex {
            ring: ring.clone(),
            low,
            ranks,
            diffs,
        })
    }

    /// Build from a list of differentials `d_{low+1}, ..., d_{high}` with ranks
    /// read off the matrices.
    pub fn from_differentials(ring: &R, low: i64, diffs: Vec<Matrix<R>>) -> Result<Self> {
        let Some(first) = diffs.first() else {
            return Err(Error::Invalid("no differentials".into()));
        };
        let mut ranks = vec![first.rows()];
        let mut ds = vec![Matrix::zeros(ring, 0, first.rows())];
        for d in diffs {
            ranks.push(d.cols());
            ds.push(d);
        }
        Self::new(ring, low, ranks, ds)
    }

    pub fn zero(ring: &R) -> Self {
        ChainComplex {
            ring: ring.clone(),
            low: 0,
            ranks: vec![],
            diffs: vec![],
        }
    }

    /// `A^rank` placed in degree `n`.
    pub fn concentrated(ring: &R, n: i64, rank: usize) -> Self {
        ChainComplex {
            ring: ring.clone(),
            low: n,
            ranks: vec![rank],
            diffs: vec![Matrix::zeros(ring, 0, rank)],
        }
    }

    /// Build from a per-degree description over `[low, high]`.
    pub fn from_fn(
        ring: &R,
        low: i64,
        high: i64,
        rank: impl Fn(i64) -> usize,
        d: impl Fn(i64) -> Matrix<R>,
    ) -> Result<Self> {
        if high < low {
            return Ok(Self::zero(ring));
        }
        let ranks = (low..=high).map(&rank).collect();
        let diffs = (low..=high).map(&d).collect();
        Self::new(ring, low, ranks, diffs)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// Lowest stored degree.
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest stored degree (below `low` when nothing is stored).
    pub fn high(&self) -> i64 {
        self.low + self.ranks.len() as i64 - 1
    }

    pub fn rank(&self, n: i64) -> usize {
        let i = n - self.low;
        if i < 0 || i >= self.ranks.len() as i64 {
            0
        } else {
            self.ranks[i as usize]
        }
    }

    pub fn d(&self, n: i64) -> Matrix<R> {
        let i = n - self.low;
        if i < 0 || i >= self.ranks.len() as i64 {
            Matrix::zeros(&self.ring, self.rank(n - 1), self.rank(n))
        } else {
            self.diffs[i as usize].clone()
        }
    }

    /// Smallest interval containing every nonzero module.
    pub fn support(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = (self.low..=self.high()).filter(|&n| self.rank(n) > 0).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    pub fn length(&self) -> usize {
        self.support().map_or(0, |(a, b)| (b - a) as usize)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// The same complex stored exactly over its support.
    pub fn trimmed(&self) -> Self {
        match self.support() {
            None => Self::zero(&self.ring),
            Some((a, b)) => ChainComplex {
                ring: self.ring.clone(),
                low: a,
                ranks: (a..=b).map(|n| self.rank(n)).collect(),
                diffs: (a..=b).map(|n| self.d(n)).collect(),
            },
        }
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let (lo, hi) = union_range(self, o);
        Self::from_fn(
            &self.ring,
            lo,
            hi,
            |n| self.rank(n) + o.rank(n),
            |n| self.d(n).block_diag(&o.d(n)),
        )
        .expect("direct sum of complexes")
    }
}

fn union_range<R: Ring>(a: &ChainComplex<R>, b: &ChainComplex<R>) -> (i64, i64) {
    match (a.support(), b.support()) {
        (None, None) => (0, -1),
        (Some(s), None) | (None, Some(s)) => s,
        (Some(s), Some(t)) => (s.0.min(t.0), s.1.max(t.1)),
    }
}

/// A chain map given by its components `f(n): dom_n -> cod_n`.
#[derive(Clone, Debug)]
pub struct ChainMap<R: Ring> {
    pub dom: ChainComplex<R>,
    pub cod: ChainComplex<R>,
    low: i64,
    comps: Vec<Matrix<R>>,
}

impl<R: Ring> PartialEq for ChainMap<R> {
    fn eq(&self, o: &Self) -> bool {
        if self.dom != o.dom || self.cod != o.cod {
            return false;
        }
        let (lo, hi) = self.range();
        (lo..=hi).all(|n| self.at(n) == o.at(n))
    }
}

impl<R: Ring> ChainMap<R> {
    pub fn new(dom: ChainComplex<R>, cod: ChainComplex<R>, f: impl Fn(i64) -> Matrix<R>) -> Result<Self> {
        let m = Self::unchecked(dom, cod, f)?;
        if let Some(n) = m.non_commuting_degree() {
            return Err(Error::Invalid(format!(
                "map does not commute with differentials in degree {n}"
            )));
        }
        Ok(m)
    }

    /// Checks shapes only.
    pub fn unchecked(dom: ChainComplex<R>, cod: ChainComplex<R>, f: impl Fn(i64) -> Matrix<R>) -> Result<Self> {
        let (low, high) = union_range(&dom, &cod);
        let comps: Vec<Matrix<R>> = (low..=high).map(f).collect();
        for (i, c) in comps.iter().enumerate() {
            let n = low + i as i64;
            if c.shape() != (cod.rank(n), dom.rank(n)) {
                return Err(Error::Dimension(format!(
                    "component in degree {n} is {}x{}, expected {}x{}",
                    c.rows(),
                    c.cols(),
                    cod.rank(n),
                    dom.rank(n)
                )));
            }
        }
        Ok(ChainMap {
            dom,
            cod,
            low,
            comps,
        })
    }

    pub fn identity(x: &ChainComplex<R>) -> Self {
        let r = x.ring().clone();
        Self::unchecked(x.clone(), x.clone(), |n| Matrix::identity(&r, x.rank(n))).expect("identity")
    }

    pub fn zero(dom: &ChainComplex<R>, cod: &ChainComplex<R>) -> Self {
        let r = dom.ring().clone();
        Self::unchecked(dom.clone(), cod.clone(), |n| {
            Matrix::zeros(&r, cod.rank(n), dom.rank(n))
        })
        .expect("zero map")
    }

    pub fn ring(&self) -> &R {
        self.dom.ring()
    }

    /// Degrees where components may be nonzero.
    pub fn range(&self) -> (i64, i64) {
        (self.low, self.low + self.comps.len() as i64 - 1)
    }

    pub fn at(&self, n: i64) -> Matrix<R> {
        let i = n - self.low;
        if i < 0 || i >= self.comps.len() as i64 {
            Matrix::zeros(self.ring(), self.cod.rank(n), self.dom.rank(n))
        } else {
            self.comps[i as usize].clone()
        }
    }

    /// First degree `n` with `d f_n != f_{n-1} d`.
    pub fn non_commuting_degree(&self) -> Option<i64> {
        let (lo, hi) = self.range();
        (lo..=hi + 1).find(|&n| self.cod.d(n).mul(&self.at(n)) != self.at(n - 1).mul(&self.dom.d(n)))
    }

    pub fn is_chain_map(&self) -> bool {
        self.non_commuting_degree().is_none()
    }

    /// `self ∘ g`
    pub fn compose(&self, g: &ChainMap<R>) -> Result<ChainMap<R>> {
        if g.cod != self.dom {
            return Err(Error::Dimension("chain maps are not composable".into()));
        }
        Self::unchecked(g.dom.clone(), self.cod.clone(), |n| self.at(n).mul(&g.at(n)))
    }

    fn zip(&self, o: &Self, f: impl Fn(&Matrix<R>, &Matrix<R>) -> Matrix<R>) -> Result<Self> {
        if self.dom != o.dom || self.cod != o.cod {
            return Err(Error::Dimension("chain maps have different ends".into()));
        }
        Self::unchecked(self.dom.clone(), self.cod.clone(), |n| f(&self.at(n), &o.at(n)))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        Self::unchecked(self.dom.clone(), self.cod.clone(), |n| self.at(n).neg()).expect("negation")
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.comps.iter().all(|c| c.is_identity())
    }

    /// Whether every component is injective and the cokernels are free with
    /// the given complement.
    pub fn is_degreewise_split_mono(&self) -> bool
    where
        R: ExactRing,
    {
        let (lo, hi) = self.range();
        (lo..=hi).all(|n| {
            let m = self.at(n);
            // a left inverse exists iff the transpose is surjective
            let t = m.transpose();
            let id = Matrix::identity(self.ring(), m.cols());
            crate::arith::linalg::solve_matrix(&t, &id).is_some()
        })
    }
}

/// Maps `H_n: X_n -> Y_{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Homotopy<R: Ring> {
    low: i64,
    maps: Vec<Matrix<R>>,
}

impl<R: Ring> Homotopy<R> {
    pub fn new(dom: &ChainComplex<R>, cod: &ChainComplex<R>, h: impl Fn(i64) -> Matrix<R>) -> Result<Self> {
        let (lo, hi) = union_range(dom, cod);
        let low = lo - 1;
        let maps: Vec<Matrix<R>> = (low..=hi).map(h).collect();
        for (i, m) in maps.iter().enumerate() {
            let n = low + i as i64;
            if m.shape() != (cod.rank(n + 1), dom.rank(n)) {
                return Err(Error::Dimension(format!("homotopy component in degree {n}")));
            }
        }
        Ok(Homotopy { low, maps })
    }

    pub fn zero(dom: &ChainComplex<R>, cod: &ChainComplex<R>) -> Self {
        let r = dom.ring().clone();
        Self::new(dom, cod, |n| Matrix::zeros(&r, cod.rank(n + 1), dom.rank(n))).expect("zero homotopy")
    }

    pub fn at(&self, ring: &R, rows: usize, cols: usize, n: i64) -> Matrix<R> {
        let i = n - self.low;
        if i < 0 || i >= self.maps.len() as i64 {
            Matrix::zeros(ring, rows, cols)
        } else {
            self.maps[i as usize].clone()
        }
    }

    /// The component in degree `n` for maps `dom -> cod`.
    pub fn component(&self, dom: &ChainComplex<R>, cod: &ChainComplex<R>, n: i64) -> Matrix<R> {
        self.at(dom.ring(), cod.rank(n + 1), dom.rank(n), n)
    }
}

/// Whether `f - g = d H + H d` in every degree.
pub fn verify_homotopy<R: Ring>(f: &ChainMap<R>, g: &ChainMap<R>, h: &Homotopy<R>) -> bool {
    if f.dom != g.dom || f.cod != g.cod {
        return false;
    }
    let (x, y) = (&f.dom, &f.cod);
    let (lo, hi) = union_range(x, y);
    (lo..=hi).all(|n| {
        let lhs = f.at(n).sub(&g.at(n));
        let rhs = y
            .d(n + 1)
            .mul(&h.component(x, y, n))
            .add(&h.component(x, y, n - 1).mul(&x.d(n)));
        lhs == rhs
    })
}

/// `x[k]_n = x_{n+k}` with differential `(-1)^k d_{n+k}`.
pub fn shift<R: Ring>(x: &ChainComplex<R>, k: i64) -> ChainComplex<R> {
    let r = x.ring();
    let diffs = x
        .diffs
        .iter()
        .map(|d| if k % 2 == 0 { d.clone() } else { d.neg() })
        .collect();
    ChainComplex {
        ring: r.clone(),
        low: x.low - k,
        ranks: x.ranks.clone(),
        diffs,
    }
}

/// Shift of a chain map: same components, reindexed.
pub fn shift_map<R: Ring>(f: &ChainMap<R>, k: i64) -> ChainMap<R> {
    ChainMap::unchecked(shift(&f.dom, k), shift(&f.cod, k), |n| f.at(n + k)).expect("shifted map")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Keep degrees `>= k`.
    AtLeast,
    /// Keep degrees `<= k`.
    AtMost,
}

/// Brutal truncation `σ_{>=k}` or `σ_{<=k}`.
pub fn truncate_brutal<R: Ring>(x: &ChainComplex<R>, k: i64, side: Side) -> ChainComplex<R> {
    let keep = |n: i64| match side {
        Side::AtLeast => n >= k,
        Side::AtMost => n <= k,
    };
    let r = x.ring().clone();
    let rank = |n| if keep(n) { x.rank(n) } else { 0 };
    ChainComplex::from_fn(&r, x.low, x.high(), rank, |n| {
        if keep(n) && keep(n - 1) {
            x.d(n)
        } else {
            Matrix::zeros(&r, rank(n - 1), rank(n))
        }
    })
    .expect("truncation")
}

/// The degreewise split sequence `σ_{<=k-1} x -> x -> σ_{>=k} x`. With
/// differentials lowering degree the low part is the subcomplex.
pub fn brutal_sequence<R: Ring>(x: &ChainComplex<R>, k: i64) -> (ChainMap<R>, ChainMap<R>) {
    let r = x.ring().clone();
    let top = truncate_brutal(x, k, Side::AtLeast);
    let bottom = truncate_brutal(x, k - 1, Side::AtMost);
    let inc = ChainMap::new(bottom, x.clone(), |n| {
        if n < k {
            Matrix::identity(&r, x.rank(n))
        } else {
            Matrix::zeros(&r, x.rank(n), 0)
        }
    })
    .expect("brutal inclusion");
    let proj = ChainMap::new(x.clone(), top, |n| {
        if n >= k {
            Matrix::identity(&r, x.rank(n))
        } else {
            Matrix::zeros(&r, 0, x.rank(n))
        }
    })
    .expect("brutal projection");
    (inc, proj)
}

/// A bounded complex of presented modules; `d(n)` is given on generators.
#[derive(Clone, Debug)]
pub struct PresentedComplex<R: ExactRing> {
    pub low: i64,
    pub modules: Vec<PresentedModule<R>>,
    pub diffs: Vec<Matrix<R>>,
}

impl<R: ExactRing> PresentedComplex<R> {
    pub fn from_free(x: &ChainComplex<R>) -> Self {
        PresentedComplex {
            low: x.low,
            modules: x.ranks.iter().map(|&n| PresentedModule::free(x.ring(), n)).collect(),
            diffs: x.diffs.clone(),
        }
    }

    pub fn module(&self, ring: &R, n: i64) -> PresentedModule<R> {
        let i = n - self.low;
        if i < 0 || i >= self.modules.len() as i64 {
            PresentedModule::zero(ring)
        } else {
            self.modules[i as usize].clone()
        }
    }

    fn diff(&self, ring: &R, n: i64) -> FpMap<R> {
        let (dom, cod) = (self.module(ring, n), self.module(ring, n - 1));
        let i = n - self.low;
        let mat = if i < 0 || i >= self.diffs.len() as i64 {
            Matrix::zeros(ring, cod.ngens(), dom.ngens())
        } else {
            self.diffs[i as usize].clone()
        };
        FpMap::unchecked(dom, cod, mat).expect("differential shape")
    }

    pub fn homology(&self, ring: &R, n: i64) -> Result<PresentedModule<R>> {
        homology_pair(&self.diff(ring, n + 1), &self.diff(ring, n))
    }
}

/// Good truncation exactly as written in the conventions: `τ_{<=k}` keeps
/// `x_n` for `n <= k` and puts `ker d_{k+1}` in degree `k+1`; `τ_{>=k+1}` keeps
/// `x_n` for `n >= k+2` and puts `im d_{k+1}` in degree `k+1`. The new module
/// is presented on generators of the kernel (resp. image) and every
/// differential touching it is the restriction of `d_{k+1}` (resp. the map
/// induced by `d_{k+2}`), which is zero in both cases.
pub fn truncate_good<R: ExactRing>(x: &ChainComplex<R>, k: i64, side: Side) -> PresentedComplex<R> {
    let r = x.ring();
    let d = x.d(k + 1);
    let (gens, sub) = match side {
        Side::AtMost => {
            let g = kernel(&d);
            (g.cols(), PresentedModule::new(kernel(&g)))
        }
        Side::AtLeast => (d.cols(), PresentedModule::new(kernel(&d))),
    };
    let (lo, hi) = match side {
        Side::AtMost => (x.low.min(k), k + 1),
        Side::AtLeast => (k + 1, x.high().max(k + 1)),
    };
    let mut modules = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let special = n == k + 1;
        let m = if special {
            sub.clone()
        } else {
            PresentedModule::free(r, x.rank(n))
        };
        let below = if n == lo {
            0
        } else if n - 1 == k + 1 {
            gens
        } else {
            x.rank(n - 1)
        };
        let dm = if special || n - 1 == k + 1 || n == lo {
            Matrix::zeros(r, below, m.ngens())
        } else {
            x.d(n)
        };
        modules.push(m);
        diffs.push(dm);
    }
    PresentedComplex {
        low: lo,
        modules,
        diffs,
    }
}

/// `(Cone f)_n = x_{n-1} ⊕ y_n` with `d = [[-d^x, 0], [-f, d^y]]`.
pub fn cone<R: Ring>(f: &ChainMap<R>) -> Result<ChainComplex<R>> {
    let (x, y) = (&f.dom, &f.cod);
    let r = x.ring().clone();
    let flip = active_mutation() == Some(Mutation::ConeSignFlip);
    let (lo, hi) = union_range(x, y);
    let (lo, hi) = (lo, hi + 1);
    ChainComplex::from_fn(
        &r,
        lo,
        hi,
        |n| x.rank(n - 1) + y.rank(n),
        |n| {
            let dx = if flip { x.d(n - 1) } else { x.d(n - 1).neg() };
            let fx = f.at(n - 1).neg();
            Matrix::blocks(
                &r,
                &[x.rank(n - 2), y.rank(n - 1)],
                &[x.rank(n - 1), y.rank(n)],
                &[&[Some(&dx), None], &[Some(&fx), Some(&y.d(n))]],
            )
        },
    )
}

/// Inclusion `y -> Cone f` and projection `Cone f -> x[-1]`.
pub fn cone_sequence<R: Ring>(f: &ChainMap<R>) -> Result<(ChainMap<R>, ChainMap<R>)> {
    let (x, y) = (&f.dom, &f.cod);
    let c = cone(f)?;
    let r = x.ring().clone();
    let xs = shift(x, -1);
    let inc = ChainMap::new(y.clone(), c.clone(), |n| {
        Matrix::zeros(&r, x.rank(n - 1), y.rank(n)).vstack(&Matrix::identity(&r, y.rank(n)))
    })?;
    // x[-1] has differential -d^x, matching the cone's top-left block
    let proj = ChainMap::new(c, xs, |n| {
        Matrix::identity(&r, x.rank(n - 1)).hstack(&Matrix::zeros(&r, x.rank(n - 1), y.rank(n)))
    })?;
    Ok((inc, proj))
}

/// Functoriality of the cone on commutative squares `(a, b): f -> g`.
pub fn cone_map<R: Ring>(f: &ChainMap<R>, g: &ChainMap<R>, a: &ChainMap<R>, b: &ChainMap<R>) -> Result<ChainMap<R>> {
    ChainMap::new(cone(f)?, cone(g)?, |n| a.at(n - 1).block_diag(&b.at(n)))
}

pub fn homology<R: ExactRing>(x: &ChainComplex<R>, n: i64) -> Result<PresentedModule<R>> {
    let r = x.ring();
    let free = |k: i64| PresentedModule::free(r, x.rank(k));
    let d1 = FpMap::unchecked(free(n + 1), free(n), x.d(n + 1))?;
    let d0 = FpMap::unchecked(free(n), free(n - 1), x.d(n))?;
    homology_pair(&d1, &d0)
}

/// `ker d_n ⊆ im d_{n+1}`.
pub fn is_exact_at<R: ExactRing>(x: &ChainComplex<R>, n: i64) -> bool {
    if x.rank(n) == 0 {
        return true;
    }
    let k = kernel(&x.d(n));
    if k.cols() == 0 {
        return true;
    }
    contains_all::<R>(&x.ring().span(&x.d(n + 1), false), &k)
}

pub fn is_acyclic<R: ExactRing>(x: &ChainComplex<R>) -> bool {
    (x.low..=x.high()).all(|n| is_exact_at(x, n))
}

pub fn is_quasi_iso<R: ExactRing>(f: &ChainMap<R>) -> bool {
    match cone(f) {
        Ok(c) => is_acyclic(&c),
        Err(_) => false,
    }
}

/// Solve for `H` with `f = d H + H d`.
pub fn null_homotopy<R: ExactRing>(f: &ChainMap<R>) -> Option<Homotopy<R>> {
    let (x, y) = (&f.dom, &f.cod);
    let r = x.ring();
    let (lo, hi) = union_range(x, y);
    if hi < lo {
        return Some(Homotopy::zero(x, y));
    }
    // unknown blocks H_n for n in [lo-1, hi], vectorized column-major
    let hdeg: Vec<i64> = (lo - 1..=hi).collect();
    let size = |n: i64| y.rank(n + 1) * x.rank(n);
    let mut offset = std::collections::HashMap::new();
    let mut total = 0;
    for &n in &hdeg {
        offset.insert(n, total);
        total += size(n);
    }
    let eqs: Vec<i64> = (lo..=hi).collect();
    let eq_rows: usize = eqs.iter().map(|&n| y.rank(n) * x.rank(n)).sum();
    if eq_rows == 0 {
        return Some(Homotopy::zero(x, y));
    }
    let mut sys = Matrix::zeros(r, eq_rows, total);
    let mut rhs = Vec::with_capacity(eq_rows);
    let mut row = 0;
    for &n in &eqs {
        let (ry, rx) = (y.rank(n), x.rank(n));
        if ry * rx == 0 {
            continue;
        }
        // vec(d^y_{n+1} H_n) = (I ⊗ d^y_{n+1}) vec(H_n)
        if size(n) > 0 {
            let a = Matrix::identity(r, rx).kron(&y.d(n + 1));
            sys.put(row, offset[&n], &a);
        }
        // vec(H_{n-1} d^x_n) = ((d^x_n)^T ⊗ I) vec(H_{n-1})
        if size(n - 1) > 0 {
            let b = x.d(n).transpose().kron(&Matrix::identity(r, ry));
            sys.put(row, offset[&(n - 1)], &b);
        }
        let fv = f.at(n);
        for j in 0..rx {
            for i in 0..ry {
                rhs.push(fv.get(i, j).clone());
            }
        }
        row += ry * rx;
    }
    let sol = if total == 0 {
        if !rhs.iter().all(|v| r.is_zero(v)) {
            return None;
        }
        Vec::new()
    } else {
        solve(&sys, &rhs)?
    };
    Homotopy::new(x, y, |n| {
        let (rows, cols) = (y.rank(n + 1), x.rank(n));
        let Some(&o) = offset.get(&n) else {
            return Matrix::zeros(r, rows, cols);
        };
        let mut m = Matrix::zeros(r, rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.set(i, j, sol[o + j * rows + i].clone());
            }
        }
        m
    })
    .ok()
}

/// Witnesses that `y ≃ x ⊕ Cone(i)` for a strict retraction `p ∘ i = id_x`.
#[derive(Clone, Debug)]
pub struct Splitting<R: Ring> {
    pub z: ChainComplex<R>,
    pub sum: ChainComplex<R>,
    /// `y -> x ⊕ z`
    pub phi: ChainMap<R>,
    /// `x ⊕ z -> y`
    pub psi: ChainMap<R>,
    /// `ψ ∘ φ - id_y = dH + Hd`
    pub homotopy_y: Homotopy<R>,
    /// `φ ∘ ψ - id = dH + Hd` on `x ⊕ z`
    pub homotopy_sum: Homotopy<R>,
}

pub fn retraction_splitting<R: Ring>(i: &ChainMap<R>, p: &ChainMap<R>) -> Result<Splitting<R>> {
    let (x, y) = (&i.dom, &i.cod);
    if p.dom != *y || p.cod != *x {
        return Err(Error::Dimension("retraction has the wrong ends".into()));
    }
    if !p.compose(i)?.is_identity() {
        return Err(Error::Precondition("p ∘ i is not the identity".into()));
    }
    let r = x.ring().clone();
    let z = cone(i)?;
    let sum = x.direct_sum(&z);
    let id = |k: usize| Matrix::identity(&r, k);
    let zero = |a: usize, b: usize| Matrix::zeros(&r, a, b);
    // φ(b) = (p b, (0, b))
    let phi = ChainMap::new(y.clone(), sum.clone(), |n| {
        p.at(n).vstack(&zero(x.rank(n - 1), y.rank(n))).vstack(&id(y.rank(n)))
    })?;
    // ψ(a, (a', b)) = i a + (1 - i p) b
    let psi = ChainMap::new(sum.clone(), y.clone(), |n| {
        let ip = i.at(n).mul(&p.at(n));
        i.at(n)
            .hstack(&zero(y.rank(n), x.rank(n - 1)))
            .hstack(&id(y.rank(n)).sub(&ip))
    })?;
    let homotopy_y = Homotopy::zero(y, y);
    // H(a, (a', b)) = (0, (p b - a, 0))
    let homotopy_sum = Homotopy::new(&sum, &sum, |n| {
        let (xn, xn1, yn, yn1) = (x.rank(n), x.rank(n - 1), y.rank(n), y.rank(n + 1));
        let mid = id(xn).neg().hstack(&zero(xn, xn1)).hstack(&p.at(n));
        zero(x.rank(n + 1), xn + xn1 + yn)
            .vstack(&mid)
            .vstack(&zero(yn1, xn + xn1 + yn))
    })?;
    Ok(Splitting {
        z,
        sum,
        phi,
        psi,
        homotopy_y,
        homotopy_sum,
    })
}

impl<R: Ring> Splitting<R> {
    pub fn verify(&self) -> bool {
        let y = &self.psi.cod;
        let (Ok(pf), Ok(fp)) = (self.psi.compose(&self.phi), self.phi.compose(&self.psi)) else {
            return false;
        };
        self.phi.is_chain_map()
            && self.psi.is_chain_map()
            && verify_homotopy(&pf, &ChainMap::identity(y), &self.homotopy_y)
            && verify_homotopy(&fp, &ChainMap::identity(&self.sum), &self.homotopy_sum)
    }
}

/// `Σ (-1)^n rank x_n`.
pub fn euler_characteristic<R: Ring>(x: &ChainComplex<R>) -> i64 {
    (x.low..=x.high())
        .map(|n| {
            let k = x.rank(n) as i64;
            if n.rem_euclid(2) == 0 {
                k
            } else {
                -k
            }
        })
        .sum()
}

#[cfg(test)]
mod tests;
