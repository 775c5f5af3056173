//! Finitely presented modules, maps between them, and the module-level
//! decisions built on syzygies.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::arith::linalg::{contains_all, infer_weights, kernel};
use crate::arith::{smith_normal_form, ExactRing, Matrix, Ring, Span};
use crate::error::{Error, Result};

mod resolution;

pub use resolution::{pd_at_most, projective_dimension};

/// Default bound on the exponent searched by annihilation checks.
pub const DEFAULT_POWER_BOUND: u32 = 16;

/// A free module of finite rank, optionally graded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    pub rank: usize,
    pub grading: Option<Vec<i64>>,
}

impl FreeModule {
    pub fn new(rank: usize) -> Self {
        FreeModule {
            rank,
            grading: None,
        }
    }

    pub fn graded(grading: Vec<i64>) -> Self {
        FreeModule {
            rank: grading.len(),
            grading: Some(grading),
        }
    }
}

/// The cokernel of `relations: R^k -> R^n`.
pub struct PresentedModule<R: ExactRing> {
    rel: Matrix<R>,
    grading: Option<Vec<i64>>,
    span: OnceLock<Arc<R::Span>>,
}

impl<R: ExactRing> Clone for PresentedModule<R> {
    fn clone(&self) -> Self {
        PresentedModule {
            rel: self.rel.clone(),
            grading: self.grading.clone(),
            span: self.span.clone(),
        }
    }
}

impl<R: ExactRing> fmt::Debug for PresentedModule<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coker {}", self.rel.to_text())
    }
}

impl<R: ExactRing> PartialEq for PresentedModule<R> {
    fn eq(&self, o: &Self) -> bool {
        self.rel == o.rel
    }
}

impl<R: ExactRing> PresentedModule<R> {
    pub fn new(rel: Matrix<R>) -> Self {
        PresentedModule {
            rel,
            grading: None,
            span: OnceLock::new(),
        }
    }

    pub fn with_grading(rel: Matrix<R>, grading: Vec<i64>) -> Result<Self> {
        if grading.len() != rel.rows() {
            return Err(Error::Dimension(format!(
                "grading of length {} for {} generators",
                grading.len(),
                rel.rows()
            )));
        }
        Ok(PresentedModule {
            rel,
            grading: Some(grading),
            span: OnceLock::new(),
        })
    }

    pub fn free(ring: &R, n: usize) -> Self {
        Self::new(Matrix::zeros(ring, n, 0))
    }

    pub fn zero(ring: &R) -> Self {
        Self::free(ring, 0)
    }

    pub fn ring(&self) -> &R {
        self.rel.ring()
    }

    pub fn ngens(&self) -> usize {
        self.rel.rows()
    }

    pub fn relations(&self) -> &Matrix<R> {
        &self.rel
    }

    pub fn grading(&self) -> Option<&[i64]> {
        self.grading.as_deref()
    }

    pub fn span(&self) -> &R::Span {
        self.span
            .get_or_init(|| Arc::new(self.ring().span(&self.rel, false)))
    }

    /// Whether `v` (in generator coordinates) is zero in the module.
    pub fn is_zero_element(&self, v: &[R::Elem]) -> bool {
        self.span().contains(v)
    }

    pub fn reduce(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        self.span().reduce(v)
    }

    pub fn is_zero(&self) -> bool {
        let r = self.ring();
        (0..self.ngens()).all(|i| self.span().contains(&unit_vector(r, self.ngens(), i)))
    }

    /// True when the presentation has no nonzero relations.
    pub fn is_visibly_free(&self) -> bool {
        self.rel.is_zero()
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let grading = match (&self.grading, &o.grading) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        PresentedModule {
            rel: self.rel.block_diag(&o.rel),
            grading,
            span: OnceLock::new(),
        }
    }

    /// The quotient by the submodule generated by the columns of `extra`.
    pub fn quotient(&self, extra: &Matrix<R>) -> Self {
        PresentedModule {
            rel: self.rel.hstack(extra),
            grading: self.grading.clone(),
            span: OnceLock::new(),
        }
    }
}

pub fn unit_vector<R: Ring>(r: &R, n: usize, i: usize) -> Vec<R::Elem> {
    let mut v = vec![r.zero(); n];
    v[i] = r.one();
    v
}

/// A submodule presented through its generators.
#[derive(Clone, Debug)]
pub struct Kernel<R: ExactRing> {
    /// Generators as columns in the ambient coordinates.
    pub generators: Matrix<R>,
    /// The kernel as an abstract module on those generators.
    pub module: PresentedModule<R>,
}

/// A homomorphism of presented modules given on generators.
#[derive(Clone, Debug)]
pub struct FpMap<R: ExactRing> {
    pub dom: PresentedModule<R>,
    pub cod: PresentedModule<R>,
    pub mat: Matrix<R>,
}

impl<R: ExactRing> FpMap<R> {
    pub fn new(dom: PresentedModule<R>, cod: PresentedModule<R>, mat: Matrix<R>) -> Result<Self> {
        let f = Self::unchecked(dom, cod, mat)?;
        if !f.is_well_defined() {
            return Err(Error::Invalid(
                "map does not send relations into relations".into(),
            ));
        }
        Ok(f)
    }

    pub fn unchecked(dom: PresentedModule<R>, cod: PresentedModule<R>, mat: Matrix<R>) -> Result<Self> {
        if mat.shape() != (cod.ngens(), dom.ngens()) {
            return Err(Error::Dimension(format!(
                "map matrix {}x{} between modules on {} and {} generators",
                mat.rows(),
                mat.cols(),
                dom.ngens(),
                cod.ngens()
            )));
        }
        Ok(FpMap { dom, cod, mat })
    }

    pub fn identity(m: &PresentedModule<R>) -> Self {
        FpMap {
            dom: m.clone(),
            cod: m.clone(),
            mat: Matrix::identity(m.ring(), m.ngens()),
        }
    }

    pub fn zero(dom: &PresentedModule<R>, cod: &PresentedModule<R>) -> Self {
        FpMap {
            dom: dom.clone(),
            cod: cod.clone(),
            mat: Matrix::zeros(dom.ring(), cod.ngens(), dom.ngens()),
        }
    }

    pub fn is_well_defined(&self) -> bool {
        contains_all::<R>(self.cod.span(), &self.mat.mul(self.dom.relations()))
    }

    /// `self ∘ g`
    pub fn compose(&self, g: &FpMap<R>) -> Result<FpMap<R>> {
        if g.cod != self.dom {
            return Err(Error::Dimension("maps are not composable".into()));
        }
        Ok(FpMap {
            dom: g.dom.clone(),
            cod: self.cod.clone(),
            mat: self.mat.mul(&g.mat),
        })
    }

    /// Generators of `{v : mat v in relations of cod}`.
    pub fn preimage_generators(&self) -> Matrix<R> {
        let a = self.dom.ngens();
        let k = kernel(&self.mat.hstack(self.cod.relations()));
        k.submatrix(0, a, 0, k.cols())
    }

    pub fn kernel(&self) -> Kernel<R> {
        let gens = self.preimage_generators();
        submodule_quotient(&gens, self.dom.relations())
    }

    pub fn cokernel(&self) -> PresentedModule<R> {
        self.cod.quotient(&self.mat)
    }

    pub fn image(&self) -> PresentedModule<R> {
        PresentedModule::new(self.preimage_generators())
    }

    pub fn is_zero(&self) -> bool {
        contains_all::<R>(self.cod.span(), &self.mat)
    }

    pub fn is_injective(&self) -> bool {
        contains_all::<R>(self.dom.span(), &self.preimage_generators())
    }

    pub fn is_surjective(&self) -> bool {
        let s = self.cod.relations().ring().span(&self.cod.relations().hstack(&self.mat), false);
        let n = self.cod.ngens();
        (0..n).all(|i| s.contains(&unit_vector(self.mat.ring(), n, i)))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    /// Equality as homomorphisms (matrices may differ by relations).
    pub fn equals(&self, o: &FpMap<R>) -> bool {
        self.mat.shape() == o.mat.shape()
            && contains_all::<R>(self.cod.span(), &self.mat.sub(&o.mat))
    }
}

/// `span(gens) / (span(gens) ∩ span(rel))`, presented on `gens`.
pub fn submodule_quotient<R: ExactRing>(gens: &Matrix<R>, rel: &Matrix<R>) -> Kernel<R> {
    let k = gens.cols();
    let syz = kernel(&gens.hstack(rel));
    Kernel {
        generators: gens.clone(),
        module: PresentedModule::new(syz.submatrix(0, k, 0, syz.cols())),
    }
}

/// The kernel of a map of free modules, with its generators.
pub fn syzygies<R: ExactRing>(f: &Matrix<R>) -> Kernel<R> {
    let gens = kernel(f);
    let rel = kernel(&gens);
    Kernel {
        generators: gens,
        module: PresentedModule::new(rel),
    }
}

/// Injectivity of a map of free modules over a domain: full column rank
/// over the fraction field.
pub fn is_injective<R: ExactRing>(f: &Matrix<R>) -> bool {
    f.rank() == f.cols()
}

/// Injectivity decided by computing the kernel.
pub fn is_injective_by_syzygies<R: ExactRing>(f: &Matrix<R>) -> bool {
    kernel(f).is_zero()
}

/// Least `m <= bound` with `f^m M = 0`.
pub fn power_annihilates<R: ExactRing>(
    f: &R::Elem,
    m: &PresentedModule<R>,
    bound: u32,
) -> Result<Option<u32>> {
    if bound < 1 {
        return Err(Error::Invalid("annihilation bound must be at least 1".into()));
    }
    let r = m.ring();
    let n = m.ngens();
    let mut vs: Vec<Vec<R::Elem>> = (0..n).map(|i| unit_vector(r, n, i)).collect();
    for k in 1..=bound {
        let mut all_zero = true;
        for v in vs.iter_mut() {
            let fv: Vec<_> = v.iter().map(|x| r.mul(f, x)).collect();
            *v = m.reduce(&fv);
            all_zero &= v.iter().all(|x| r.is_zero(x));
        }
        if all_zero {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Generators of `N : f = {v : f v in N}` for `N` the relation submodule.
pub fn colon<R: ExactRing>(rel: &Matrix<R>, f: &R::Elem) -> Matrix<R> {
    let r = rel.ring();
    let n = rel.rows();
    let k = kernel(&Matrix::scalar(r, n, f.clone()).hstack(rel));
    k.submatrix(0, n, 0, k.cols())
}

/// `N : f^∞`, by iterating colons until they stabilize.
pub fn saturation<R: ExactRing>(rel: &Matrix<R>, f: &R::Elem) -> Matrix<R> {
    let r = rel.ring();
    let mut cur = rel.clone();
    loop {
        let next = colon(&cur, f);
        if contains_all::<R>(&r.span(&cur, false), &next) {
            return cur;
        }
        cur = next;
    }
}

/// Support inside `V(fs)`: every `f` in `fs` is nilpotent on the module.
pub fn supported_on<R: ExactRing>(m: &PresentedModule<R>, fs: &[R::Elem]) -> bool {
    let r = m.ring();
    let n = m.ngens();
    fs.iter().all(|f| {
        if matches!(power_annihilates(f, m, DEFAULT_POWER_BOUND), Ok(Some(_))) {
            return true;
        }
        let sat = r.span(&saturation(m.relations(), f), false);
        (0..n).all(|i| sat.contains(&unit_vector(r, n, i)))
    })
}

/// `ker d0 / im d1` for composable `d1: M1 -> M2`, `d0: M2 -> M3`.
pub fn homology_pair<R: ExactRing>(d1: &FpMap<R>, d0: &FpMap<R>) -> Result<PresentedModule<R>> {
    if d1.cod != d0.dom {
        return Err(Error::Dimension("maps are not composable".into()));
    }
    if !d0.compose(d1)?.is_zero() {
        return Err(Error::Precondition("composite is not zero".into()));
    }
    let k = d0.preimage_generators();
    let rel = d1.mat.hstack(d1.cod.relations());
    Ok(submodule_quotient(&k, &rel).module)
}

/// Whether a module over a one-variable ring, a field or the integers is free,
/// via Smith form.
pub(crate) fn is_free_by_smith<R: ExactRing>(m: &PresentedModule<R>) -> Result<bool> {
    let s = smith_normal_form(m.relations())?;
    let r = m.ring();
    Ok(s.invariant_factors().iter().all(|d| r.unit_inverse(d).is_some()))
}

/// Degrees of the relation columns, given (or inferring) generator degrees.
pub(crate) fn relation_degrees<R: ExactRing>(m: &PresentedModule<R>) -> Option<(Vec<i64>, Vec<i64>)> {
    infer_weights(m.relations(), m.grading())
}

#[cfg(test)]
mod tests;
