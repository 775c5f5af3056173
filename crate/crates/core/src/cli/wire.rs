//! Serializable forms of complexes, double complexes and certificates.
//! Matrices travel in their text form.

use serde::{Deserialize, Serialize};

use crate::arith::{ExactRing, Matrix, Ring};
use crate::complexes::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::witness::{DoubleComplex, DoubleMap, Orientation, Step, Tag, ZigzagCertificate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireComplex {
    pub low: i64,
    pub ranks: Vec<usize>,
    /// `d_low, ..., d_high`.
    pub diffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireChainMap {
    pub low: i64,
    pub comps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireDouble {
    pub low: i64,
    pub entries: Vec<WireComplex>,
    /// `D_{low+1}, ..., D_high`.
    pub diffs: Vec<WireChainMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireStep {
    pub orientation: String,
    pub tag: String,
    /// Components of the map in outer degrees `low, low + 1, ...`.
    pub low: i64,
    pub comps: Vec<WireChainMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireCertificate {
    pub ring: String,
    pub shift: i64,
    /// `objects[i]` and `objects[i + 1]` are the ends of `steps[i]`.
    pub objects: Vec<WireDouble>,
    pub steps: Vec<WireStep>,
}

fn mat<R: ExactRing>(ring: &R, s: &str) -> Result<Matrix<R>> {
    Matrix::from_text(ring, s)
}

pub fn complex_to_wire<R: Ring>(x: &ChainComplex<R>) -> WireComplex {
    let x = x.trimmed();
    if x.is_zero() {
        return WireComplex {
            low: 0,
            ranks: vec![],
            diffs: vec![],
        };
    }
    WireComplex {
        low: x.low(),
        ranks: (x.low()..=x.high()).map(|n| x.rank(n)).collect(),
        diffs: (x.low()..=x.high()).map(|n| x.d(n).to_text()).collect(),
    }
}

pub fn complex_from_wire<R: ExactRing>(ring: &R, w: &WireComplex) -> Result<ChainComplex<R>> {
    if w.ranks.len() != w.diffs.len() {
        return Err(Error::Dimension("complex: ranks and differentials differ in number".into()));
    }
    let diffs = w.diffs.iter().map(|s| mat(ring, s)).collect::<Result<Vec<_>>>()?;
    if diffs.is_empty() {
        return Ok(ChainComplex::zero(ring));
    }
    ChainComplex::new(ring, w.low, w.ranks.clone(), diffs)
}

fn map_to_wire<R: Ring>(f: &ChainMap<R>) -> WireChainMap {
    let (lo, hi) = f.range();
    let (mut lo, mut hi) = (lo, hi);
    while lo <= hi && f.at(lo).is_zero() {
        lo += 1;
    }
    while hi >= lo && f.at(hi).is_zero() {
        hi -= 1;
    }
    if hi < lo {
        return WireChainMap { low: 0, comps: vec![] };
    }
    WireChainMap {
        low: lo,
        comps: (lo..=hi).map(|n| f.at(n).to_text()).collect(),
    }
}

fn map_from_wire<R: ExactRing>(
    dom: &ChainComplex<R>,
    cod: &ChainComplex<R>,
    w: &WireChainMap,
) -> Result<ChainMap<R>> {
    let comps = w.comps.iter().map(|s| mat(dom.ring(), s)).collect::<Result<Vec<_>>>()?;
    let ring = dom.ring().clone();
    let hi = w.low + comps.len() as i64 - 1;
    for (i, m) in comps.iter().enumerate() {
        let n = w.low + i as i64;
        if m.shape() != (cod.rank(n), dom.rank(n)) {
            return Err(Error::Dimension(format!("chain map component in degree {n} has the wrong shape")));
        }
    }
    ChainMap::new(dom.clone(), cod.clone(), |n| {
        if n < w.low || n > hi {
            Matrix::zeros(&ring, cod.rank(n), dom.rank(n))
        } else {
            comps[(n - w.low) as usize].clone()
        }
    })
}

pub fn double_to_wire<R: Ring>(x: &DoubleComplex<R>) -> WireDouble {
    let x = x.trimmed();
    let Some((lo, hi)) = x.support() else {
        return WireDouble {
            low: 0,
            entries: vec![],
            diffs: vec![],
        };
    };
    WireDouble {
        low: lo,
        entries: (lo..=hi).map(|p| complex_to_wire(&x.entry(p))).collect(),
        diffs: (lo + 1..=hi).map(|p| map_to_wire(&x.d(p))).collect(),
    }
}

pub fn double_from_wire<R: ExactRing>(ring: &R, w: &WireDouble) -> Result<DoubleComplex<R>> {
    if w.entries.is_empty() {
        return Ok(DoubleComplex::zero(ring));
    }
    if w.diffs.len() + 1 != w.entries.len() {
        return Err(Error::Dimension("double complex: wrong number of differentials".into()));
    }
    let es = w.entries.iter().map(|e| complex_from_wire(ring, e)).collect::<Result<Vec<_>>>()?;
    let maps = w
        .diffs
        .iter()
        .enumerate()
        .map(|(i, d)| map_from_wire(&es[i + 1], &es[i], d))
        .collect::<Result<Vec<_>>>()?;
    DoubleComplex::new(ring, w.low, es, maps)
}

fn step_to_wire<R: Ring>(s: &Step<R>) -> WireStep {
    let (lo, hi) = s.map.range();
    WireStep {
        orientation: s.orientation.name().into(),
        tag: s.tag.name().into(),
        low: lo,
        comps: (lo..=hi).map(|p| map_to_wire(&s.map.at(p))).collect(),
    }
}

pub fn certificate_to_wire<R: Ring>(c: &ZigzagCertificate<R>) -> WireCertificate {
    let mut objects = vec![double_to_wire(&c.start)];
    objects.extend(c.steps.iter().map(|s| double_to_wire(&s.after)));
    if c.steps.is_empty() {
        objects = vec![double_to_wire(&c.start), double_to_wire(&c.end)];
    }
    WireCertificate {
        ring: c.start.ring().descriptor().to_text(),
        shift: c.shift,
        objects,
        steps: c.steps.iter().map(step_to_wire).collect(),
    }
}

/// Rebuild a certificate. The declared end is the last object; steps are
/// rebuilt as given, without the mutation hook, so that `verify` judges what
/// was written.
pub fn certificate_from_wire<R: ExactRing>(ring: &R, w: &WireCertificate) -> Result<ZigzagCertificate<R>> {
    if w.ring != ring.descriptor().to_text() {
        return Err(Error::RingMismatch(format!("certificate over `{}`", w.ring)));
    }
    let need = w.steps.len() + 1 + usize::from(w.steps.is_empty());
    if w.objects.len() != need {
        return Err(Error::Dimension(format!(
            "{} objects for {} steps",
            w.objects.len(),
            w.steps.len()
        )));
    }
    let objs = w.objects.iter().map(|o| double_from_wire(ring, o)).collect::<Result<Vec<_>>>()?;
    let mut steps = Vec::new();
    for (i, s) in w.steps.iter().enumerate() {
        let orientation = Orientation::from_name(&s.orientation)
            .ok_or_else(|| Error::Invalid(format!("unknown orientation `{}`", s.orientation)))?;
        let tag = Tag::from_name(&s.tag).ok_or_else(|| Error::Invalid(format!("unknown tag `{}`", s.tag)))?;
        let (before, after) = (objs[i].clone(), objs[i + 1].clone());
        let (dom, cod) = match orientation {
            Orientation::Forward => (&before, &after),
            Orientation::Backward => (&after, &before),
        };
        let hi = s.low + s.comps.len() as i64 - 1;
        let map = DoubleMap::new(dom.clone(), cod.clone(), |p| {
            if p < s.low || p > hi {
                Ok(ChainMap::zero(&dom.entry(p), &cod.entry(p)))
            } else {
                map_from_wire(&dom.entry(p), &cod.entry(p), &s.comps[(p - s.low) as usize])
            }
        })?;
        steps.push(Step {
            before,
            after,
            map,
            orientation,
            tag,
        });
    }
    Ok(ZigzagCertificate {
        start: objs[0].clone(),
        end: objs[objs.len() - 1].clone(),
        steps,
        shift: w.shift,
    })
}
