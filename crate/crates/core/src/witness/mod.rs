//! Complexes of complexes, their totalization, and zig-zag certificates
//! connecting them by quasi-isomorphisms and level-weak equivalences.
//!
//! The weak equivalences inside entries are always inner quasi-isomorphisms.
//! A map of double complexes is a quasi-isomorphism when every row of its
//! outer cone is exact; bounded exact complexes of free modules split, so
//! this is the decidable form of acyclicity used throughout.

use std::fmt;

use crate::arith::{ExactRing, Matrix, Ring};
use crate::complexes::{active_mutation, cone, cone_map, homology, is_acyclic, is_quasi_iso, shift, ChainComplex, ChainMap, Mutation};
use crate::error::{Error, Result};
use crate::fpmodules::{FpMap, PresentedModule};

mod generate;

pub use generate::{random_double_complex, random_outer_morphism, DoubleParams};

/// A bounded complex `X_high -> ... -> X_low` of bounded chain complexes.
#[derive(Clone, Debug)]
pub struct DoubleComplex<R: Ring> {
    ring: R,
    low: i64,
    entries: Vec<ChainComplex<R>>,
    /// `diffs[i]` is `D_{low+i}: X_{low+i} -> X_{low+i-1}`.
    diffs: Vec<ChainMap<R>>,
}

impl<R: Ring> PartialEq for DoubleComplex<R> {
    fn eq(&self, o: &Self) -> bool {
        if self.ring != o.ring {
            return false;
        }
        let (lo, hi) = (self.low.min(o.low), self.high().max(o.high()));
        (lo..=hi).all(|p| self.entry(p) == o.entry(p) && (p == lo || self.d(p) == o.d(p)))
    }
}

impl<R: Ring> DoubleComplex<R> {
    /// Entries in outer degrees `low, low + 1, ...`; `d(p, q)` is the matrix of
    /// `D_p` in inner degree `q`, for `p > low`.
    pub fn from_fn(
        ring: &R,
        low: i64,
        entries: Vec<ChainComplex<R>>,
        d: impl Fn(i64, i64) -> Matrix<R>,
    ) -> Result<Self> {
        let mut maps = Vec::new();
        for i in 1..entries.len() {
            let p = low + i as i64;
            maps.push(ChainMap::new(entries[i].clone(), entries[i - 1].clone(), |q| d(p, q))?);
        }
        Self::new(ring, low, entries, maps)
    }

    /// `maps[i]` is `D_{low+i+1}`. Checks that every map is a chain map with
    /// the right ends and that consecutive maps compose to zero.
    pub fn new(ring: &R, low: i64, entries: Vec<ChainComplex<R>>, maps: Vec<ChainMap<R>>) -> Result<Self> {
        if entries.is_empty() && !maps.is_empty() || !entries.is_empty() && maps.len() + 1 != entries.len() {
            return Err(Error::Dimension(format!(
                "{} outer differentials for {} entries",
                maps.len(),
                entries.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.dom != entries[i + 1] || m.cod != entries[i] {
                return Err(Error::Dimension(format!(
                    "outer differential in degree {} has the wrong ends",
                    low + i as i64 + 1
                )));
            }
            if let Some(q) = m.non_commuting_degree() {
                return Err(Error::Invalid(format!(
                    "outer differential in degree {} is not a chain map (inner degree {q})",
                    low + i as i64 + 1
                )));
            }
        }
        for i in 1..maps.len() {
            if !maps[i - 1].compose(&maps[i])?.is_zero() {
                return Err(Error::Invalid(format!(
                    "outer differentials do not square to zero at degree {}",
                    low + i as i64 + 1
                )));
            }
        }
        Ok(Self::unchecked(ring, low, entries, maps))
    }

    fn unchecked(ring: &R, low: i64, entries: Vec<ChainComplex<R>>, maps: Vec<ChainMap<R>>) -> Self {
        let mut diffs = Vec::with_capacity(entries.len());
        if let Some(x) = entries.first() {
            diffs.push(ChainMap::zero(x, &ChainComplex::zero(ring)));
        }
        diffs.extend(maps);
        DoubleComplex {
            ring: ring.clone(),
            low,
            entries,
            diffs,
        }
    }

    pub fn zero(ring: &R) -> Self {
        Self::unchecked(ring, 0, vec![], vec![])
    }

    /// `x` placed in outer degree `p`.
    pub fn concentrated(x: &ChainComplex<R>, p: i64) -> Self {
        Self::unchecked(x.ring(), p, vec![x.clone()], vec![])
    }

    /// The embedding `j` in outer degree zero.
    pub fn embed(x: &ChainComplex<R>) -> Self {
        Self::concentrated(x, 0)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.entries.len() as i64 - 1
    }

    pub fn entry(&self, p: i64) -> ChainComplex<R> {
        let i = p - self.low;
        if i < 0 || i >= self.entries.len() as i64 {
            ChainComplex::zero(&self.ring)
        } else {
            self.entries[i as usize].clone()
        }
    }

    /// `D_p: X_p -> X_{p-1}`.
    pub fn d(&self, p: i64) -> ChainMap<R> {
        let i = p - self.low;
        if i <= 0 || i >= self.entries.len() as i64 {
            ChainMap::zero(&self.entry(p), &self.entry(p - 1))
        } else {
            self.diffs[i as usize].clone()
        }
    }

    /// Outer degrees with a nonzero entry, as an interval.
    pub fn support(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = (self.low..=self.high()).filter(|&p| !self.entry(p).is_zero()).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    /// Outer length of the support.
    pub fn length(&self) -> usize {
        self.support().map_or(0, |(a, b)| (b - a) as usize)
    }

    /// The same object stored exactly over its support.
    pub fn trimmed(&self) -> Self {
        match self.support() {
            None => Self::zero(&self.ring),
            Some((a, b)) => {
                let entries = (a..=b).map(|p| self.entry(p)).collect();
                let maps = (a + 1..=b).map(|p| self.d(p)).collect();
                Self::unchecked(&self.ring, a, entries, maps)
            }
        }
    }

    /// Smallest and largest inner degree stored in any entry.
    pub fn inner_range(&self) -> Option<(i64, i64)> {
        let s: Vec<(i64, i64)> = self.entries.iter().filter_map(|x| x.support()).collect();
        Some((s.iter().map(|t| t.0).min()?, s.iter().map(|t| t.1).max()?))
    }

    /// The ordinary complex `p -> X_{p,q}` for fixed inner degree `q`.
    pub fn row(&self, q: i64) -> ChainComplex<R> {
        ChainComplex::from_fn(&self.ring, self.low, self.high(), |p| self.entry(p).rank(q), |p| self.d(p).at(q))
            .expect("rows of a double complex are complexes")
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let (lo, hi) = outer_union(self, o);
        if hi < lo {
            return Self::zero(&self.ring);
        }
        let entries = (lo..=hi).map(|p| self.entry(p).direct_sum(&o.entry(p))).collect();
        let maps = (lo + 1..=hi)
            .map(|p| {
                let (a, b) = (self.d(p), o.d(p));
                let dom = self.entry(p).direct_sum(&o.entry(p));
                let cod = self.entry(p - 1).direct_sum(&o.entry(p - 1));
                ChainMap::unchecked(dom, cod, |q| a.at(q).block_diag(&b.at(q))).expect("block diagonal")
            })
            .collect();
        Self::unchecked(&self.ring, lo, entries, maps)
    }

    /// `Σ_p (-1)^p χ(X_p)`.
    pub fn euler_characteristic(&self) -> i64 {
        (self.low..=self.high())
            .map(|p| {
                let e = crate::complexes::euler_characteristic(&self.entry(p));
                if p.rem_euclid(2) == 0 {
                    e
                } else {
                    -e
                }
            })
            .sum()
    }
}

/// Every row is exact.
pub fn row_exact<R: ExactRing>(x: &DoubleComplex<R>) -> bool {
    match x.inner_range() {
        None => true,
        Some((a, b)) => (a..=b).all(|q| is_acyclic(&x.row(q))),
    }
}

/// Every entry is acyclic.
pub fn levelwise_acyclic<R: ExactRing>(x: &DoubleComplex<R>) -> bool {
    (x.low()..=x.high()).all(|p| is_acyclic(&x.entry(p)))
}

/// A matrix assembled from blocks; missing blocks are zero.
fn assemble<R: Ring>(
    ring: &R,
    heights: &[usize],
    widths: &[usize],
    block: impl Fn(usize, usize) -> Option<Matrix<R>>,
) -> Matrix<R> {
    let mut m = Matrix::zeros(ring, heights.iter().sum(), widths.iter().sum());
    let mut r0 = 0;
    for (i, &h) in heights.iter().enumerate() {
        let mut c0 = 0;
        for (j, &w) in widths.iter().enumerate() {
            if let Some(b) = block(i, j) {
                debug_assert_eq!(b.shape(), (h, w));
                m.put(r0, c0, &b);
            }
            c0 += w;
        }
        r0 += h;
    }
    m
}

/// Sum of the given complexes, in order.
fn sum_of<R: Ring>(ring: &R, parts: &[ChainComplex<R>]) -> ChainComplex<R> {
    parts.iter().fold(ChainComplex::zero(ring), |acc, x| acc.direct_sum(x))
}

/// A chain map between sums of complexes given by blocks `(i, j)` from the
/// `j`-th domain summand to the `i`-th codomain summand.
fn block_map<R: Ring>(
    dom: &[ChainComplex<R>],
    cod: &[ChainComplex<R>],
    ring: &R,
    block: impl Fn(i64, usize, usize) -> Option<Matrix<R>>,
) -> Result<ChainMap<R>> {
    let (x, y) = (sum_of(ring, dom), sum_of(ring, cod));
    ChainMap::new(x, y, |q| {
        let hs: Vec<usize> = cod.iter().map(|c| c.rank(q)).collect();
        let ws: Vec<usize> = dom.iter().map(|c| c.rank(q)).collect();
        assemble(ring, &hs, &ws, |i, j| block(q, i, j))
    })
}

/// The inclusion `(0, id)ᵗ` of `y` into `Cone f` for any `f` into `y`.
fn into_cone<R: Ring>(f: &ChainMap<R>) -> Result<ChainMap<R>> {
    let (x, y) = (&f.dom, &f.cod);
    let r = x.ring().clone();
    ChainMap::new(y.clone(), cone(f)?, |n| {
        Matrix::zeros(&r, x.rank(n - 1), y.rank(n)).vstack(&Matrix::identity(&r, y.rank(n)))
    })
}

/// The total complex: `Tot_n = ⊕_p X_{p, n-p}`, summands in decreasing `p`,
/// with differential `(-1)^p (D + d)` on `X_{p,*}`.
pub fn tot_outer<R: Ring>(x: &DoubleComplex<R>) -> ChainComplex<R> {
    let ring = x.ring();
    let Some((qa, qb)) = x.inner_range() else {
        return ChainComplex::zero(ring);
    };
    let ps: Vec<i64> = (x.low()..=x.high()).rev().collect();
    let ranks = |n: i64| -> Vec<usize> { ps.iter().map(|&p| x.entry(p).rank(n - p)).collect() };
    ChainComplex::from_fn(
        ring,
        x.low() + qa,
        x.high() + qb,
        |n| ranks(n).iter().sum(),
        |n| {
            assemble(ring, &ranks(n - 1), &ranks(n), |i, j| {
                let (pr, pc) = (ps[i], ps[j]);
                let m = if pr == pc {
                    x.entry(pc).d(n - pc)
                } else if pr == pc - 1 {
                    x.d(pc).at(n - pc)
                } else {
                    return None;
                };
                Some(if pc.rem_euclid(2) == 0 { m } else { m.neg() })
            })
        },
    )
    .expect("the total complex squares to zero")
}

/// A map of double complexes: chain maps `F_p: X_p -> Y_p` commuting with
/// the outer differentials.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleMap<R: Ring> {
    pub dom: DoubleComplex<R>,
    pub cod: DoubleComplex<R>,
    low: i64,
    comps: Vec<ChainMap<R>>,
}

fn outer_union<R: Ring>(a: &DoubleComplex<R>, b: &DoubleComplex<R>) -> (i64, i64) {
    match (a.entries.is_empty(), b.entries.is_empty()) {
        (true, true) => (0, -1),
        (false, true) => (a.low(), a.high()),
        (true, false) => (b.low(), b.high()),
        _ => (a.low().min(b.low()), a.high().max(b.high())),
    }
}

impl<R: Ring> DoubleMap<R> {
    pub fn new(dom: DoubleComplex<R>, cod: DoubleComplex<R>, f: impl Fn(i64) -> Result<ChainMap<R>>) -> Result<Self> {
        let (low, high) = outer_union(&dom, &cod);
        let comps = (low..=high).map(f).collect::<Result<Vec<_>>>()?;
        let m = DoubleMap { dom, cod, low, comps };
        m.check()?;
        Ok(m)
    }

    /// Ends, chain-map property and naturality.
    pub fn check(&self) -> Result<()> {
        let (lo, hi) = self.range();
        for p in lo..=hi {
            let f = self.at(p);
            if f.dom != self.dom.entry(p) || f.cod != self.cod.entry(p) {
                return Err(Error::Dimension(format!("component in outer degree {p} has the wrong ends")));
            }
            if !f.is_chain_map() {
                return Err(Error::Invalid(format!("component in outer degree {p} is not a chain map")));
            }
        }
        for p in lo..=hi + 1 {
            let a = self.cod.d(p).compose(&self.at(p))?;
            let b = self.at(p - 1).compose(&self.dom.d(p))?;
            if a != b {
                return Err(Error::Invalid(format!(
                    "map does not commute with the outer differential in degree {p}"
                )));
            }
        }
        Ok(())
    }

    pub fn identity(x: &DoubleComplex<R>) -> Self {
        DoubleMap::new(x.clone(), x.clone(), |p| Ok(ChainMap::identity(&x.entry(p)))).expect("identity")
    }

    pub fn zero(dom: &DoubleComplex<R>, cod: &DoubleComplex<R>) -> Self {
        DoubleMap::new(dom.clone(), cod.clone(), |p| Ok(ChainMap::zero(&dom.entry(p), &cod.entry(p))))
            .expect("zero map")
    }

    pub fn range(&self) -> (i64, i64) {
        (self.low, self.low + self.comps.len() as i64 - 1)
    }

    pub fn at(&self, p: i64) -> ChainMap<R> {
        let i = p - self.low;
        if i < 0 || i >= self.comps.len() as i64 {
            ChainMap::zero(&self.dom.entry(p), &self.cod.entry(p))
        } else {
            self.comps[i as usize].clone()
        }
    }

    /// `self ∘ g`
    pub fn compose(&self, g: &DoubleMap<R>) -> Result<DoubleMap<R>> {
        if g.cod != self.dom {
            return Err(Error::Dimension("maps of double complexes are not composable".into()));
        }
        DoubleMap::new(g.dom.clone(), self.cod.clone(), |p| self.at(p).compose(&g.at(p)))
    }

    /// Every component is an inner quasi-isomorphism.
    pub fn is_levelwise_quasi_iso(&self) -> bool
    where
        R: ExactRing,
    {
        let (lo, hi) = outer_union(&self.dom, &self.cod);
        (lo..=hi).all(|p| is_quasi_iso(&self.at(p)))
    }
}

/// `Tot` on morphisms: block diagonal, no signs.
pub fn tot_map<R: Ring>(f: &DoubleMap<R>) -> Result<ChainMap<R>> {
    let (x, y) = (tot_outer(&f.dom), tot_outer(&f.cod));
    let ring = f.dom.ring().clone();
    let (lo, hi) = outer_union(&f.dom, &f.cod);
    let ps: Vec<i64> = (lo..=hi).rev().collect();
    ChainMap::new(x, y, |n| {
        let hs: Vec<usize> = ps.iter().map(|&p| f.cod.entry(p).rank(n - p)).collect();
        let ws: Vec<usize> = ps.iter().map(|&p| f.dom.entry(p).rank(n - p)).collect();
        assemble(&ring, &hs, &ws, |i, j| (i == j).then(|| f.at(ps[i]).at(n - ps[i])))
    })
}

/// The outer cone: `Cone_B(F)_p = X_{p-1} ⊕ Y_p` with outer differential
/// `[[-D^X, 0], [-F, D^Y]]`.
pub fn outer_cone<R: Ring>(f: &DoubleMap<R>) -> Result<DoubleComplex<R>> {
    let (x, y) = (&f.dom, &f.cod);
    let ring = x.ring();
    let (lo, hi) = outer_union(x, y);
    if hi < lo {
        return Ok(DoubleComplex::zero(ring));
    }
    let parts = |p: i64| vec![x.entry(p - 1), y.entry(p)];
    let entries = (lo..=hi + 1).map(|p| sum_of(ring, &parts(p))).collect();
    let maps = (lo + 1..=hi + 1)
        .map(|p| {
            block_map(&parts(p), &parts(p - 1), ring, |q, i, j| match (i, j) {
                (0, 0) => Some(x.d(p - 1).at(q).neg()),
                (1, 0) => Some(f.at(p - 1).at(q).neg()),
                (1, 1) => Some(y.d(p).at(q)),
                _ => None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    DoubleComplex::new(ring, lo, entries, maps)
}

/// `Cone_B` on commutative squares `(a, b): F -> G`: `a_{p-1} ⊕ b_p`.
pub fn outer_cone_map<R: Ring>(
    f: &DoubleMap<R>,
    g: &DoubleMap<R>,
    a: &DoubleMap<R>,
    b: &DoubleMap<R>,
) -> Result<DoubleMap<R>> {
    let (cf, cg) = (outer_cone(f)?, outer_cone(g)?);
    let ring = cf.ring().clone();
    DoubleMap::new(cf, cg, |p| {
        let dom = [f.dom.entry(p - 1), f.cod.entry(p)];
        let cod = [g.dom.entry(p - 1), g.cod.entry(p)];
        block_map(&dom, &cod, &ring, |q, i, j| match (i, j) {
            (0, 0) => Some(a.at(p - 1).at(q)),
            (1, 1) => Some(b.at(p).at(q)),
            _ => None,
        })
    })
}

/// The levelwise cone `Cone_A(F)`: entries `Cone F_p`.
pub fn levelwise_cone<R: Ring>(f: &DoubleMap<R>) -> Result<DoubleComplex<R>> {
    let (x, y) = (&f.dom, &f.cod);
    let (lo, hi) = outer_union(x, y);
    if hi < lo {
        return Ok(DoubleComplex::zero(x.ring()));
    }
    let entries = (lo..=hi).map(|p| cone(&f.at(p))).collect::<Result<Vec<_>>>()?;
    let maps = (lo + 1..=hi)
        .map(|p| cone_map(&f.at(p), &f.at(p - 1), &x.d(p), &y.d(p)))
        .collect::<Result<Vec<_>>>()?;
    DoubleComplex::new(x.ring(), lo, entries, maps)
}

/// `C^A x`: the cone of the identity in every entry.
pub fn levelwise_c<R: Ring>(x: &DoubleComplex<R>) -> Result<DoubleComplex<R>> {
    levelwise_cone(&DoubleMap::identity(x))
}

/// Inclusion `y -> Cone_A(F)` into the second summand of every entry.
fn into_levelwise_cone<R: Ring>(f: &DoubleMap<R>) -> Result<DoubleMap<R>> {
    DoubleMap::new(f.cod.clone(), levelwise_cone(f)?, |p| into_cone(&f.at(p)))
}

/// `C^A x -> Cone_A F`, `cone_map(id, F_p, id, F_p)` in every entry.
fn c_to_levelwise_cone<R: Ring>(f: &DoubleMap<R>) -> Result<DoubleMap<R>> {
    let id = DoubleMap::identity(&f.dom);
    DoubleMap::new(levelwise_c(&f.dom)?, levelwise_cone(f)?, |p| {
        cone_map(&id.at(p), &f.at(p), &id.at(p), &f.at(p))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    /// Quasi-isomorphism of double complexes.
    Qis,
    /// Inner quasi-isomorphism in every outer degree.
    Lw,
}

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::Qis => "qis",
            Tag::Lw => "lw",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "qis" => Some(Tag::Qis),
            "lw" => Some(Tag::Lw),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// The morphism goes from `before` to `after`.
    Forward,
    /// The morphism goes from `after` to `before`.
    Backward,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::Forward => "forward",
            Orientation::Backward => "backward",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "forward" => Some(Orientation::Forward),
            "backward" => Some(Orientation::Backward),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step<R: Ring> {
    pub before: DoubleComplex<R>,
    pub after: DoubleComplex<R>,
    pub map: DoubleMap<R>,
    pub orientation: Orientation,
    pub tag: Tag,
}

impl<R: Ring> Step<R> {
    /// A step whose ends are read off the map. Under the mislabeling
    /// mutation every `lw` tag becomes `qis`.
    pub fn new(map: DoubleMap<R>, orientation: Orientation, tag: Tag) -> Self {
        let tag = if active_mutation() == Some(Mutation::MislabelQis) {
            Tag::Qis
        } else {
            tag
        };
        let (before, after) = match orientation {
            Orientation::Forward => (map.dom.clone(), map.cod.clone()),
            Orientation::Backward => (map.cod.clone(), map.dom.clone()),
        };
        Step {
            before,
            after,
            map,
            orientation,
            tag,
        }
    }
}

/// Whether `F` is a quasi-isomorphism of double complexes: the outer cone is
/// row exact, and the totalization is a quasi-isomorphism.
pub fn is_outer_qis<R: ExactRing>(f: &DoubleMap<R>) -> bool {
    let rows = outer_cone(f).map(|c| row_exact(&c)).unwrap_or(false);
    rows && tot_map(f).map(|t| is_quasi_iso(&t)).unwrap_or(false)
}

pub fn verify_step<R: ExactRing>(step: &Step<R>) -> bool {
    let (src, dst) = match step.orientation {
        Orientation::Forward => (&step.before, &step.after),
        Orientation::Backward => (&step.after, &step.before),
    };
    if step.map.dom != *src || step.map.cod != *dst || step.map.check().is_err() {
        return false;
    }
    match step.tag {
        Tag::Qis => is_outer_qis(&step.map),
        Tag::Lw => step.map.is_levelwise_quasi_iso(),
    }
}

/// Tagged morphisms connecting `start` to `end`. `shift` records the
/// inner shift of the totalization reached by `zigzag_to_tot`, and is zero
/// for the other constructions.
#[derive(Clone, Debug, PartialEq)]
pub struct ZigzagCertificate<R: Ring> {
    pub start: DoubleComplex<R>,
    pub end: DoubleComplex<R>,
    pub steps: Vec<Step<R>>,
    pub shift: i64,
}

impl<R: ExactRing> ZigzagCertificate<R> {
    pub fn empty(x: &DoubleComplex<R>) -> Self {
        ZigzagCertificate {
            start: x.clone(),
            end: x.clone(),
            steps: vec![],
            shift: 0,
        }
    }

    /// Adjacent objects match, endpoints match, every step verifies.
    pub fn verify(&self) -> Result<()> {
        let mut cur = &self.start;
        for (i, s) in self.steps.iter().enumerate() {
            if s.before != *cur {
                return Err(Error::Verification(format!("step {i} does not start where step {} ends", i as i64 - 1)));
            }
            if !verify_step(s) {
                return Err(Error::Verification(format!(
                    "step {i} ({} {}) does not verify",
                    s.orientation.name(),
                    s.tag.name()
                )));
            }
            cur = &s.after;
        }
        if *cur != self.end {
            return Err(Error::Verification("the last object is not the declared end".into()));
        }
        Ok(())
    }

    /// Concatenation; shifts add.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        if self.end != o.start {
            return Err(Error::Dimension("certificates do not meet".into()));
        }
        let mut steps = self.steps.clone();
        steps.extend(o.steps.iter().cloned());
        Ok(ZigzagCertificate {
            start: self.start.clone(),
            end: o.end.clone(),
            steps,
            shift: self.shift + o.shift,
        })
    }

    pub fn tags(&self) -> Vec<(Orientation, Tag)> {
        self.steps.iter().map(|s| (s.orientation, s.tag)).collect()
    }
}

impl<R: Ring> fmt::Display for ZigzagCertificate<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "certificate with {} steps, shift {}:", self.steps.len(), self.shift)?;
        for s in &self.steps {
            let arrow = match s.orientation {
                Orientation::Forward => "->",
                Orientation::Backward => "<-",
            };
            write!(f, " {arrow}{}", s.tag.name())?;
        }
        Ok(())
    }
}

fn checked<R: ExactRing>(steps: &[Step<R>]) -> Result<()> {
    for (i, s) in steps.iter().enumerate() {
        if !verify_step(s) {
            return Err(Error::Verification(format!(
                "step {i} ({} {}) does not verify",
                s.orientation.name(),
                s.tag.name()
            )));
        }
    }
    Ok(())
}

/// One round of the induction: absorb the top entry `x_n` into `Cone D_n`.
/// Returns `x -> mid` (qis) and `r -> mid` (lw), where `r` has outer length
/// one less.
fn absorb_top<R: ExactRing>(x: &DoubleComplex<R>) -> Result<(DoubleMap<R>, DoubleMap<R>)> {
    let ring = x.ring();
    let (lo, n) = (x.low(), x.high());
    let xn = x.entry(n);
    let d = x.d(n);
    let id = ChainMap::identity(&xn);
    let mut entries: Vec<ChainComplex<R>> = (lo..n - 1).map(|p| x.entry(p)).collect();
    entries.push(cone(&d)?);
    entries.push(cone(&id)?);
    let below = x.entry(n - 2);
    let mut maps: Vec<ChainMap<R>> = (lo + 1..n - 1).map(|p| x.d(p)).collect();
    if n - 1 > lo {
        let dm = x.d(n - 1);
        maps.push(ChainMap::new(cone(&d)?, below.clone(), |q| {
            Matrix::zeros(ring, below.rank(q), xn.rank(q - 1)).hstack(&dm.at(q))
        })?);
    }
    maps.push(cone_map(&id, &d, &id, &d)?);
    let mid = DoubleComplex::new(ring, lo, entries.clone(), maps.clone())?;
    let left = DoubleMap::new(x.clone(), mid.clone(), |p| {
        if p == n {
            into_cone(&id)
        } else if p == n - 1 {
            into_cone(&d)
        } else {
            Ok(ChainMap::identity(&x.entry(p)))
        }
    })?;
    entries.pop();
    maps.pop();
    let r = DoubleComplex::new(ring, lo, entries, maps)?;
    let right = DoubleMap::new(r.clone(), mid.clone(), |p| {
        if p == n {
            Ok(ChainMap::zero(&r.entry(p), &mid.entry(p)))
        } else {
            Ok(ChainMap::identity(&r.entry(p)))
        }
    })?;
    Ok((left, right))
}

/// Connect `x` to its totalization by induction on outer length. The end is
/// `shift(tot_outer(x), lo)` in outer degree `lo`, the lowest outer degree
/// of the support, and `lo` is reported as the certificate's shift.
pub fn zigzag_to_tot<R: ExactRing>(x: &DoubleComplex<R>) -> Result<ZigzagCertificate<R>> {
    let mut cur = x.trimmed();
    let lo = cur.low();
    let mut steps = Vec::new();
    while cur.high() > cur.low() {
        let (left, right) = absorb_top(&cur)?;
        steps.push(Step::new(left, Orientation::Forward, Tag::Qis));
        steps.push(Step::new(right, Orientation::Backward, Tag::Lw));
        cur = steps.last().expect("just pushed").after.trimmed();
    }
    checked(&steps)?;
    let cert = ZigzagCertificate {
        start: x.clone(),
        end: cur,
        steps,
        shift: lo,
    };
    cert.verify()?;
    Ok(cert)
}

/// Whether the end of a `zigzag_to_tot` certificate is the declared
/// shift of the totalization of its start.
pub fn endpoint_is_tot<R: ExactRing>(cert: &ZigzagCertificate<R>) -> bool {
    let expected = shift(&tot_outer(&cert.start), cert.shift);
    cert.end.length() == 0 && cert.end == DoubleComplex::concentrated(&expected, cert.shift).trimmed()
}

/// For `F` levelwise a quasi-isomorphism: `Cone_B F -> Cone_B(C^A x -> Cone^A F)`
/// (qis), followed by the totalization of the target. Every entry of the
/// end is acyclic.
pub fn solid_witness<R: ExactRing>(f: &DoubleMap<R>) -> Result<ZigzagCertificate<R>> {
    if !f.is_levelwise_quasi_iso() {
        return Err(Error::Precondition("map is not levelwise a quasi-isomorphism".into()));
    }
    let first = pushout_step(f)?;
    checked(std::slice::from_ref(&first))?;
    let head = ZigzagCertificate {
        start: first.before.clone(),
        end: first.after.clone(),
        steps: vec![first],
        shift: 0,
    };
    let tail = zigzag_to_tot(&head.end)?;
    let cert = head.compose(&tail)?;
    if !levelwise_acyclic(&cert.end) {
        return Err(Error::Verification("end of the solid witness has a non-acyclic entry".into()));
    }
    cert.verify()?;
    Ok(cert)
}

/// `Cone_B F -> Cone_B g` for `g: C^A x -> Cone^A F`, induced by the unit of
/// `C` and the inclusion into the levelwise cone.
fn pushout_step<R: ExactRing>(f: &DoubleMap<R>) -> Result<Step<R>> {
    let g = c_to_levelwise_cone(f)?;
    let unit = DoubleMap::new(f.dom.clone(), g.dom.clone(), |p| into_cone(&ChainMap::identity(&f.dom.entry(p))))?;
    let incl = into_levelwise_cone(f)?;
    let m = outer_cone_map(f, &g, &unit, &incl)?;
    Ok(Step::new(m, Orientation::Forward, Tag::Qis))
}

/// `Cone_B F -> Cone_B(C^A x -> Cone^A F) <- Cone_A F`, tags (qis, lw).
pub fn cone_compare<R: ExactRing>(f: &DoubleMap<R>) -> Result<ZigzagCertificate<R>> {
    let first = pushout_step(f)?;
    let mid = first.after.clone();
    let ca = levelwise_cone(f)?;
    let ring = f.dom.ring().clone();
    let back = DoubleMap::new(ca.clone(), mid, |p| {
        let cod = [levelwise_c(&f.dom)?.entry(p - 1), ca.entry(p)];
        block_map(std::slice::from_ref(&ca.entry(p)), &cod, &ring, |q, i, _| {
            (i == 1).then(|| Matrix::identity(&ring, ca.entry(p).rank(q)))
        })
    })?;
    let steps = vec![first, Step::new(back, Orientation::Backward, Tag::Lw)];
    checked(&steps)?;
    let cert = ZigzagCertificate {
        start: outer_cone(f)?,
        end: ca,
        steps,
        shift: 0,
    };
    cert.verify()?;
    Ok(cert)
}

/// `H_n(f): H_n(dom) -> H_n(cod)` on the presentations from `homology`.
pub fn induced_on_homology<R: ExactRing>(f: &ChainMap<R>, n: i64) -> Result<FpMap<R>> {
    let (x, y) = (&f.dom, &f.cod);
    let r = x.ring();
    let gens = |c: &ChainComplex<R>| {
        let free = |k: i64| PresentedModule::free(r, c.rank(k));
        FpMap::unchecked(free(n), free(n - 1), c.d(n)).map(|m| m.preimage_generators())
    };
    let (kx, ky) = (gens(x)?, gens(y)?);
    let (hx, hy) = (homology(x, n)?, homology(y, n)?);
    let image = f.at(n).mul(&kx);
    let sys = ky.hstack(&y.d(n + 1));
    let sol = crate::arith::linalg::solve_matrix(&sys, &image)
        .ok_or_else(|| Error::Invalid("map does not send cycles to cycles".into()))?;
    FpMap::new(hx, hy, sol.submatrix(0, ky.cols(), 0, sol.cols()))
}

/// Degrees where the maps induced on homology along the certificate,
/// read through totalization, fail to be isomorphisms.
pub fn tot_homology_mismatches<R: ExactRing>(cert: &ZigzagCertificate<R>) -> Result<Vec<i64>> {
    let mut bad = Vec::new();
    for s in &cert.steps {
        let t = tot_map(&s.map)?;
        let (lo, hi) = match (t.dom.support(), t.cod.support()) {
            (None, None) => continue,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1)),
        };
        for n in lo..=hi {
            if !induced_on_homology(&t, n)?.is_isomorphism() && !bad.contains(&n) {
                bad.push(n);
            }
        }
    }
    bad.sort();
    Ok(bad)
}

#[cfg(test)]
mod tests;
