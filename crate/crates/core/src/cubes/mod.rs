//! S-cubes of modules: boundaries, direction-wise cokernels, admissibility
//! and totalization.
//!
//! Subsets of the direction set are bit masks over the stored label order.

use std::fmt;

use crate::arith::linalg::contains_all;
use crate::arith::{ExactRing, Matrix};
use crate::complexes::{is_exact_at, ChainComplex};
use crate::error::{Error, Result};
use crate::fpmodules::{is_injective, FpMap, PresentedModule};

pub type Subset = u32;

pub fn popcount(t: Subset) -> usize {
    t.count_ones() as usize
}

/// Members of `t` in increasing index order.
pub fn members(t: Subset) -> Vec<usize> {
    (0..32).filter(|&i| t >> i & 1 == 1).collect()
}

/// Delete coordinate `k` from a mask, shifting higher bits down.
pub fn drop_bit(t: Subset, k: usize) -> Subset {
    let low = t & ((1 << k) - 1);
    let high = (t >> (k + 1)) << k;
    low | high
}

/// Insert a coordinate at position `k` with value `bit`.
pub fn insert_bit(t: Subset, k: usize, bit: bool) -> Subset {
    let low = t & ((1 << k) - 1);
    let high = (t >> k) << (k + 1);
    low | high | ((bit as Subset) << k)
}

/// The finite direction set `S`, in the order used for Tot signs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirectionSet {
    labels: Vec<String>,
}

impl DirectionSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Invalid(format!("direction `{l}` repeated")));
            }
        }
        if labels.len() > 16 {
            return Err(Error::Unsupported("more than 16 directions".into()));
        }
        Ok(DirectionSet { labels })
    }

    pub fn empty() -> Self {
        DirectionSet { labels: vec![] }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> Subset {
        ((1u64 << self.len()) - 1) as Subset
    }

    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        0..=self.full()
    }

    pub fn mask_of(&self, labels: &[String]) -> Result<Subset> {
        let mut t = 0;
        for l in labels {
            let i = self.index(l).ok_or_else(|| Error::UnresolvedReference(l.clone()))?;
            t |= 1 << i;
        }
        Ok(t)
    }

    pub fn labels_of(&self, t: Subset) -> Vec<String> {
        members(t).into_iter().map(|i| self.labels[i].clone()).collect()
    }

    pub fn without(&self, k: usize) -> Self {
        let mut labels = self.labels.clone();
        labels.remove(k);
        DirectionSet { labels }
    }

    /// Insert `label` at position `k`.
    pub fn with(&self, k: usize, label: &str) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.insert(k, label.to_string());
        DirectionSet::new(labels)
    }
}

/// A cube of finitely presented modules: `x_T` for `T ⊆ S` and boundaries
/// `d^k_T: x_T -> x_{T∖k}` given on generators.
#[derive(Clone)]
pub struct Cube<R: ExactRing> {
    ring: R,
    dirs: DirectionSet,
    vertices: Vec<PresentedModule<R>>,
    maps: Vec<Option<Matrix<R>>>,
}

impl<R: ExactRing> fmt::Debug for Cube<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cube{:?} [", self.dirs.labels)?;
        for t in self.dirs.subsets() {
            write!(f, " {:?}:{:?}", self.dirs.labels_of(t), self.vertex(t))?;
            for k in members(t) {
                write!(f, " d{}={}", self.dirs.labels[k], self.boundary(t, k).to_text())?;
            }
        }
        write!(f, " ]")
    }
}

impl<R: ExactRing> PartialEq for Cube<R> {
    fn eq(&self, o: &Self) -> bool {
        self.dirs == o.dirs && self.vertices == o.vertices && self.maps == o.maps
    }
}

impl<R: ExactRing> Cube<R> {
    /// Validates shapes, well-definedness on relations and commutativity of
    /// every square.
    pub fn new(
        ring: &R,
        dirs: DirectionSet,
        vertices: Vec<PresentedModule<R>>,
        boundary: impl Fn(Subset, usize) -> Matrix<R>,
    ) -> Result<Self> {
        let c = Self::unchecked(ring, dirs, vertices, boundary)?;
        c.validate()?;
        Ok(c)
    }

    /// Validates shapes only.
    pub fn unchecked(
        ring: &R,
        dirs: DirectionSet,
        vertices: Vec<PresentedModule<R>>,
        boundary: impl Fn(Subset, usize) -> Matrix<R>,
    ) -> Result<Self> {
        let n = dirs.len();
        if vertices.len() != 1 << n {
            return Err(Error::Dimension(format!(
                "{} vertices for {} directions",
                vertices.len(),
                n
            )));
        }
        let mut maps = vec![None; (1 << n) * n.max(1)];
        for t in dirs.subsets() {
            for k in members(t) {
                let m = boundary(t, k);
                let (src, dst) = (&vertices[t as usize], &vertices[(t & !(1 << k)) as usize]);
                if m.shape() != (dst.ngens(), src.ngens()) {
                    return Err(Error::Dimension(format!(
                        "boundary {} at {:?} is {}x{}, expected {}x{}",
                        dirs.labels[k],
                        dirs.labels_of(t),
                        m.rows(),
                        m.cols(),
                        dst.ngens(),
                        src.ngens()
                    )));
                }
                maps[t as usize * n + k] = Some(m);
            }
        }
        Ok(Cube {
            ring: ring.clone(),
            dirs,
            vertices,
            maps,
        })
    }

    /// A cube of free modules of the given ranks.
    pub fn free(
        ring: &R,
        dirs: DirectionSet,
        ranks: &[usize],
        boundary: impl Fn(Subset, usize) -> Matrix<R>,
    ) -> Result<Self> {
        let vs = ranks.iter().map(|&k| PresentedModule::free(ring, k)).collect();
        Self::new(ring, dirs, vs, boundary)
    }

    pub fn zero(ring: &R, dirs: DirectionSet) -> Self {
        let vs = vec![PresentedModule::zero(ring); 1 << dirs.len()];
        Self::unchecked(ring, dirs, vs, |_, _| Matrix::zeros(ring, 0, 0)).expect("zero cube")
    }

    /// A 0-cube.
    pub fn point(m: PresentedModule<R>) -> Self {
        let r = m.ring().clone();
        Self::unchecked(&r, DirectionSet::empty(), vec![m], |_, _| unreachable!()).expect("0-cube")
    }

    pub fn validate(&self) -> Result<()> {
        for t in self.dirs.subsets() {
            for k in members(t) {
                if !self.boundary_map(t, k).is_well_defined() {
                    return Err(Error::Invalid(format!(
                        "boundary {} at {:?} does not respect relations",
                        self.dirs.labels[k],
                        self.dirs.labels_of(t)
                    )));
                }
            }
        }
        if let Some((t, k, l)) = self.non_commuting_square() {
            return Err(Error::Invalid(format!(
                "square at {:?} in directions {}, {} does not commute",
                self.dirs.labels_of(t),
                self.dirs.labels[k],
                self.dirs.labels[l]
            )));
        }
        Ok(())
    }

    /// First `(T, k, l)` with `d^l_{T∖k} d^k_T != d^k_{T∖l} d^l_T`.
    pub fn non_commuting_square(&self) -> Option<(Subset, usize, usize)> {
        for t in self.dirs.subsets() {
            let ms = members(t);
            for (a, &k) in ms.iter().enumerate() {
                for &l in &ms[a + 1..] {
                    let lhs = self.boundary(t & !(1 << k), l).mul(self.boundary(t, k));
                    let rhs = self.boundary(t & !(1 << l), k).mul(self.boundary(t, l));
                    let target = self.vertex(t & !(1 << k) & !(1 << l));
                    let diff = lhs.sub(&rhs);
                    let ok = if target.is_visibly_free() {
                        diff.is_zero()
                    } else {
                        contains_all::<R>(target.span(), &diff)
                    };
                    if !ok {
                        return Some((t, k, l));
                    }
                }
            }
        }
        None
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn dirs(&self) -> &DirectionSet {
        &self.dirs
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn vertex(&self, t: Subset) -> &PresentedModule<R> {
        &self.vertices[t as usize]
    }

    pub fn vertices(&self) -> &[PresentedModule<R>] {
        &self.vertices
    }

    pub fn boundary(&self, t: Subset, k: usize) -> &Matrix<R> {
        self.maps[t as usize * self.dim() + k]
            .as_ref()
            .expect("boundary direction must lie in the subset")
    }

    pub fn boundary_map(&self, t: Subset, k: usize) -> FpMap<R> {
        FpMap::unchecked(
            self.vertex(t).clone(),
            self.vertex(t & !(1 << k)).clone(),
            self.boundary(t, k).clone(),
        )
        .expect("boundary shape")
    }

    /// Every vertex has no relations.
    pub fn is_free(&self) -> bool {
        self.vertices.iter().all(|v| v.is_visibly_free())
    }

    pub fn rank(&self, t: Subset) -> usize {
        self.vertex(t).ngens()
    }

    pub fn is_zero(&self) -> bool {
        self.vertices.iter().all(|v| v.is_zero())
    }

    /// `Σ_T (-1)^{#T} rank x_T` over generator counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.dirs
            .subsets()
            .map(|t| {
                let k = self.rank(t) as i64;
                if popcount(t) % 2 == 0 {
                    k
                } else {
                    -k
                }
            })
            .sum()
    }

    /// Relabel the directions (same order, new names).
    pub fn relabel(&self, dirs: DirectionSet) -> Result<Self> {
        if dirs.len() != self.dim() {
            return Err(Error::Dimension("relabeling changes the dimension".into()));
        }
        Ok(Cube {
            dirs,
            ..self.clone()
        })
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        if self.dirs != o.dirs {
            return Err(Error::Invalid("cubes on different direction sets".into()));
        }
        let vs = (0..self.vertices.len())
            .map(|t| self.vertices[t].direct_sum(&o.vertices[t]))
            .collect();
        Self::unchecked(&self.ring, self.dirs.clone(), vs, |t, k| {
            self.boundary(t, k).block_diag(o.boundary(t, k))
        })
    }
}

/// Whether every boundary is injective.
pub fn is_monic<R: ExactRing>(x: &Cube<R>) -> bool {
    x.dirs.subsets().all(|t| {
        members(t).into_iter().all(|k| {
            if x.vertex(t).is_visibly_free() && x.vertex(t & !(1 << k)).is_visibly_free() {
                is_injective(x.boundary(t, k))
            } else {
                x.boundary_map(t, k).is_injective()
            }
        })
    })
}

/// `H_0^k(x)_T = coker d^k_{T ∪ k}` on `S ∖ k`.
pub fn h0_direction<R: ExactRing>(x: &Cube<R>, k: usize) -> Result<Cube<R>> {
    if k >= x.dim() {
        return Err(Error::Invalid(format!("direction index {k} outside the cube")));
    }
    let dirs = x.dirs.without(k);
    let vs = dirs
        .subsets()
        .map(|m| {
            let t = insert_bit(m, k, false);
            x.vertex(t).quotient(x.boundary(t | 1 << k, k))
        })
        .collect();
    Cube::new(x.ring(), dirs, vs, |m, l| {
        let t = insert_bit(m, k, false);
        let old = if l >= k { l + 1 } else { l };
        x.boundary(t, old).clone()
    })
}

pub fn h0_direction_by_label<R: ExactRing>(x: &Cube<R>, label: &str) -> Result<Cube<R>> {
    let k = x
        .dirs
        .index(label)
        .ok_or_else(|| Error::UnresolvedReference(label.to_string()))?;
    h0_direction(x, k)
}

/// Monic, and every direction-wise `H_0` admissible.
pub fn is_admissible<R: ExactRing>(x: &Cube<R>) -> bool {
    if !is_monic(x) {
        return false;
    }
    if x.dim() <= 1 {
        return true;
    }
    (0..x.dim()).all(|k| h0_direction(x, k).map_or(false, |h| is_admissible(&h)))
}

/// Iterated `H_0` over the labels in `t`, in the given label order, without
/// an admissibility check.
pub fn h0_in_order<R: ExactRing>(x: &Cube<R>, labels: &[String]) -> Result<Cube<R>> {
    let mut cur = x.clone();
    for l in labels {
        cur = h0_direction_by_label(&cur, l)?;
    }
    Ok(cur)
}

/// `H_0^T(x)` in the stored direction order.
pub fn h0_iterated<R: ExactRing>(x: &Cube<R>, t: Subset) -> Result<Cube<R>> {
    if !is_admissible(x) {
        return Err(Error::Precondition("cube is not admissible".into()));
    }
    h0_in_order(x, &x.dirs.labels_of(t))
}

/// Position of every summand `x_T` inside `(Tot x)_{#T}`.
pub struct TotLayout {
    pub offsets: Vec<usize>,
    pub ranks: Vec<usize>,
}

pub fn tot_layout<R: ExactRing>(x: &Cube<R>) -> TotLayout {
    let n = x.dim();
    let mut offsets = vec![0; 1 << n];
    let mut ranks = vec![0; n + 1];
    for t in x.dirs.subsets() {
        let p = popcount(t);
        offsets[t as usize] = ranks[p];
        ranks[p] += x.rank(t);
    }
    TotLayout { offsets, ranks }
}

/// `(Tot x)_n = ⊕_{#T = n} x_T`; the component leaving `x_T` along the
/// `j`-th member of `T` carries the sign `(-1)^{j-1}`.
pub fn totalize<R: ExactRing>(x: &Cube<R>) -> Result<ChainComplex<R>> {
    if !x.is_free() {
        return Err(Error::Precondition("totalization needs free vertices".into()));
    }
    let r = x.ring();
    let n = x.dim();
    let lay = tot_layout(x);
    let mut diffs = vec![Matrix::zeros(r, 0, lay.ranks[0])];
    for p in 1..=n {
        let mut d = Matrix::zeros(r, lay.ranks[p - 1], lay.ranks[p]);
        for t in x.dirs.subsets().filter(|&t| popcount(t) == p) {
            for (j, k) in members(t).into_iter().enumerate() {
                let s = t & !(1 << k);
                let b = x.boundary(t, k);
                let b = if j % 2 == 0 { b.clone() } else { b.neg() };
                d.put(lay.offsets[s as usize], lay.offsets[t as usize], &b);
            }
        }
        diffs.push(d);
    }
    ChainComplex::new(r, 0, lay.ranks.clone(), diffs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotisomReport {
    /// `(p, H_p(Tot x) = 0)` for `p = 1..#S`.
    pub higher_vanish: Vec<(usize, bool)>,
    /// The identity on generators of `x_∅` induces `H_0(Tot x) ≅ H_0^S(x)_∅`.
    pub iso: bool,
}

impl TotisomReport {
    pub fn passed(&self) -> bool {
        self.iso && self.higher_vanish.iter().all(|&(_, ok)| ok)
    }
}

/// `H_0(Tot x)` as a presented module on the generators of `x_∅`.
pub fn h0_of_tot<R: ExactRing>(x: &Cube<R>) -> PresentedModule<R> {
    let mut m = x.vertex(0).clone();
    for k in 0..x.dim() {
        m = m.quotient(x.boundary(1 << k, k));
    }
    m
}

/// `H_p(Tot x) = 0` for `p != 0` and the canonical map
/// `H_0(Tot x) -> H_0^S(x)_∅` is an isomorphism. Admissibility is not
/// checked here; use [`verify_totisom`] for the full contract.
pub fn totisom_report<R: ExactRing>(x: &Cube<R>) -> Result<TotisomReport> {
    let tot = totalize(x)?;
    let higher_vanish = (1..=x.dim()).map(|p| (p, is_exact_at(&tot, p as i64))).collect();
    let hs = h0_in_order(x, x.dirs.labels())?;
    let target = hs.vertex(0).clone();
    let src = h0_of_tot(x);
    let id = Matrix::identity(x.ring(), src.ngens());
    let iso = match FpMap::new(src, target, id) {
        Ok(f) => f.is_isomorphism(),
        Err(_) => false,
    };
    Ok(TotisomReport { higher_vanish, iso })
}

pub fn verify_totisom<R: ExactRing>(x: &Cube<R>) -> Result<TotisomReport> {
    if !is_admissible(x) {
        return Err(Error::Precondition("cube is not admissible".into()));
    }
    totisom_report(x)
}

/// A natural transformation between cubes on the same directions.
#[derive(Clone, Debug)]
pub struct CubeMap<R: ExactRing> {
    pub dom: Cube<R>,
    pub cod: Cube<R>,
    pub maps: Vec<Matrix<R>>,
}

impl<R: ExactRing> CubeMap<R> {
    pub fn new(dom: Cube<R>, cod: Cube<R>, f: impl Fn(Subset) -> Matrix<R>) -> Result<Self> {
        if dom.dirs != cod.dirs {
            return Err(Error::Invalid("cube map between different direction sets".into()));
        }
        let maps: Vec<Matrix<R>> = dom.dirs.subsets().map(f).collect();
        let m = CubeMap { dom, cod, maps };
        for t in m.dom.dirs.subsets() {
            let v = m.vertex_map(t)?;
            if !v.is_well_defined() {
                return Err(Error::Invalid(format!(
                    "vertex map at {:?} does not respect relations",
                    m.dom.dirs.labels_of(t)
                )));
            }
            for k in members(t) {
                let s = t & !(1 << k);
                let lhs = m.cod.boundary(t, k).mul(&m.maps[t as usize]);
                let rhs = m.maps[s as usize].mul(m.dom.boundary(t, k));
                if !contains_all::<R>(m.cod.vertex(s).span(), &lhs.sub(&rhs)) {
                    return Err(Error::Invalid(format!(
                        "naturality fails at {:?} in direction {}",
                        m.dom.dirs.labels_of(t),
                        m.dom.dirs.labels()[k]
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn identity(x: &Cube<R>) -> Self {
        CubeMap {
            dom: x.clone(),
            cod: x.clone(),
            maps: x.dirs.subsets().map(|t| Matrix::identity(x.ring(), x.rank(t))).collect(),
        }
    }

    pub fn vertex_map(&self, t: Subset) -> Result<FpMap<R>> {
        FpMap::unchecked(
            self.dom.vertex(t).clone(),
            self.cod.vertex(t).clone(),
            self.maps[t as usize].clone(),
        )
    }

    /// `self ∘ g`
    pub fn compose(&self, g: &CubeMap<R>) -> Result<CubeMap<R>> {
        if g.cod != self.dom {
            return Err(Error::Dimension("cube maps are not composable".into()));
        }
        Ok(CubeMap {
            dom: g.dom.clone(),
            cod: self.cod.clone(),
            maps: self.maps.iter().zip(&g.maps).map(|(a, b)| a.mul(b)).collect(),
        })
    }

    /// The induced map on `H_0^k`.
    pub fn h0_direction(&self, k: usize) -> Result<CubeMap<R>> {
        let dom = h0_direction(&self.dom, k)?;
        let cod = h0_direction(&self.cod, k)?;
        CubeMap::new(dom, cod, |m| self.maps[insert_bit(m, k, false) as usize].clone())
    }

    /// The induced map on `H_0^S(x)_∅ -> H_0^S(y)_∅`.
    pub fn h0_total(&self) -> Result<FpMap<R>> {
        let labels = self.dom.dirs.labels();
        let a = h0_in_order(&self.dom, labels)?;
        let b = h0_in_order(&self.cod, labels)?;
        FpMap::new(a.vertex(0).clone(), b.vertex(0).clone(), self.maps[0].clone())
    }
}

/// The identity on generators between the two iterated cokernels at the
/// bottom vertex, for two direction orders.
pub fn order_independence<R: ExactRing>(x: &Cube<R>, order: &[String]) -> Result<bool> {
    let a = h0_in_order(x, x.dirs.labels())?;
    let b = h0_in_order(x, order)?;
    let (ma, mb) = (a.vertex(0).clone(), b.vertex(0).clone());
    let id = Matrix::identity(x.ring(), ma.ngens());
    Ok(match FpMap::new(ma, mb, id) {
        Ok(f) => f.is_isomorphism(),
        Err(_) => false,
    })
}

/// A cube whose vertices are `m` at `∅` and zero elsewhere.
pub fn concentrated_at_bottom<R: ExactRing>(dirs: DirectionSet, m: PresentedModule<R>) -> Cube<R> {
    let r = m.ring().clone();
    let mut vs = vec![PresentedModule::zero(&r); 1 << dirs.len()];
    vs[0] = m;
    Cube::unchecked(&r, dirs, vs.clone(), |t, k| {
        Matrix::zeros(&r, vs[(t & !(1 << k)) as usize].ngens(), vs[t as usize].ngens())
    })
    .expect("cube concentrated at the bottom vertex")
}

#[cfg(test)]
mod tests;
