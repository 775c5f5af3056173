//! Buchberger completion for submodules of free modules over k[x_1..x_n].
//!
//! Vectors are sparse term lists ordered position-over-term: a smaller
//! position index is larger, ties broken by the monomial order. Pairs are
//! selected by sugar and pruned with the Gebauer-Moeller criteria; the
//! coprime-leads criterion is used only for ideals.

use std::cmp::Ordering;

use super::poly::{Monomial, Poly, PolyRing};
use super::ring::{Field, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<C> {
    pub pos: u32,
    pub mono: Monomial,
    pub coeff: C,
}

pub type Vector<C> = Vec<Term<C>>;

pub struct Engine<'a, F: Field> {
    pub ring: &'a PolyRing<F>,
    /// Degree shift of each position, used for sugar.
    pub weights: &'a [i64],
}

struct Element<C> {
    v: Vector<C>,
    sugar: i64,
    redundant: bool,
}

struct Pair {
    i: usize,
    j: usize,
    pos: u32,
    lcm: Monomial,
    sugar: i64,
}

impl<'a, F: Field> Engine<'a, F> {
    pub fn new(ring: &'a PolyRing<F>, weights: &'a [i64]) -> Self {
        Engine { ring, weights }
    }

    pub fn cmp_terms(&self, ap: u32, am: &Monomial, bp: u32, bm: &Monomial) -> Ordering {
        bp.cmp(&ap).then_with(|| self.ring.cmp(am, bm))
    }

    fn weight(&self, pos: u32) -> i64 {
        self.weights.get(pos as usize).copied().unwrap_or(0)
    }

    pub fn sugar(&self, v: &[Term<F::Elem>]) -> i64 {
        v.iter()
            .map(|t| t.mono.degree() + self.weight(t.pos))
            .max()
            .unwrap_or(0)
    }

    /// Dense column to sparse vector, positions starting at `offset`.
    pub fn from_dense(&self, col: &[Poly<F::Elem>], offset: usize) -> Vector<F::Elem> {
        let mut v = Vec::new();
        for (i, p) in col.iter().enumerate() {
            for (m, c) in &p.terms {
                v.push(Term {
                    pos: (offset + i) as u32,
                    mono: m.clone(),
                    coeff: c.clone(),
                });
            }
        }
        v
    }

    /// Dense entries for positions `offset..offset + len`.
    pub fn to_dense(&self, v: &[Term<F::Elem>], offset: usize, len: usize) -> Vec<Poly<F::Elem>> {
        let mut out = vec![Poly { terms: vec![] }; len];
        for t in v {
            let p = t.pos as usize;
            if p >= offset && p < offset + len {
                out[p - offset].terms.push((t.mono.clone(), t.coeff.clone()));
            }
        }
        out
    }

    fn mul_term(&self, g: &[Term<F::Elem>], t: &Monomial, c: &F::Elem) -> Vector<F::Elem> {
        let f = &self.ring.field;
        g.iter()
            .map(|x| Term {
                pos: x.pos,
                mono: x.mono.mul(t),
                coeff: f.mul(&x.coeff, c),
            })
            .collect()
    }

    /// `a + c * t * b`, both inputs sorted.
    fn axpy(
        &self,
        a: &[Term<F::Elem>],
        c: &F::Elem,
        t: &Monomial,
        b: &[Term<F::Elem>],
        out: &mut Vector<F::Elem>,
    ) {
        let f = &self.ring.field;
        let (mut i, mut j) = (0, 0);
        let mut bj: Option<Term<F::Elem>> = None;
        let next_b = |j: usize| -> Term<F::Elem> {
            let x = &b[j];
            Term {
                pos: x.pos,
                mono: x.mono.mul(t),
                coeff: f.mul(&x.coeff, c),
            }
        };
        while i < a.len() && (j < b.len() || bj.is_some()) {
            if bj.is_none() {
                bj = Some(next_b(j));
                j += 1;
            }
            let y = bj.as_ref().unwrap();
            match self.cmp_terms(a[i].pos, &a[i].mono, y.pos, &y.mono) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bj.take().unwrap());
                }
                Ordering::Equal => {
                    let s = f.add(&a[i].coeff, &y.coeff);
                    if !f.is_zero(&s) {
                        out.push(Term {
                            pos: a[i].pos,
                            mono: a[i].mono.clone(),
                            coeff: s,
                        });
                    }
                    bj = None;
                    i += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        if let Some(y) = bj {
            out.push(y);
        }
        while j < b.len() {
            out.push(next_b(j));
            j += 1;
        }
    }

    pub fn make_monic(&self, v: &mut Vector<F::Elem>) {
        let f = &self.ring.field;
        if let Some(t) = v.first() {
            if !f.is_one(&t.coeff) {
                let inv = f.inv(&t.coeff);
                for x in v.iter_mut() {
                    x.coeff = f.mul(&x.coeff, &inv);
                }
            }
        }
    }

    fn find_reducer<'b>(
        &self,
        basis: &'b [Vector<F::Elem>],
        by_pos: &[Vec<usize>],
        pos: u32,
        mono: &Monomial,
        skip: Option<usize>,
    ) -> Option<&'b Vector<F::Elem>> {
        let cands = by_pos.get(pos as usize)?;
        let mut best: Option<&Vector<F::Elem>> = None;
        for &k in cands {
            if Some(k) == skip {
                continue;
            }
            let g = &basis[k];
            if g[0].mono.divides(mono) && best.map_or(true, |b| g.len() < b.len()) {
                best = Some(g);
            }
        }
        best
    }

    /// Reduce `v` by monic `basis`. With `full` every term is reduced,
    /// otherwise only leading terms. Terms at positions `>= stop` are left alone.
    pub fn reduce(
        &self,
        mut v: Vector<F::Elem>,
        basis: &[Vector<F::Elem>],
        by_pos: &[Vec<usize>],
        full: bool,
        stop: u32,
        skip: Option<usize>,
    ) -> Vector<F::Elem> {
        let f = &self.ring.field;
        let mut i = 0;
        while i < v.len() {
            if v[i].pos >= stop {
                break;
            }
            match self.find_reducer(basis, by_pos, v[i].pos, &v[i].mono, skip) {
                Some(g) => {
                    let t = g[0].mono.quotient_of(&v[i].mono);
                    let c = f.neg(&v[i].coeff);
                    let mut out = Vec::with_capacity(v.len() + g.len());
                    out.extend_from_slice(&v[..i]);
                    self.axpy(&v[i + 1..], &c, &t, &g[1..], &mut out);
                    v = out;
                }
                None => {
                    if !full {
                        break;
                    }
                    i += 1;
                }
            }
        }
        v
    }

    /// Reduced Groebner basis, sorted by increasing leading term.
    pub fn groebner(&self, gens: Vec<Vector<F::Elem>>, ideal_mode: bool) -> Vec<Vector<F::Elem>> {
        let mut els: Vec<Element<F::Elem>> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut raw: Vec<Vector<F::Elem>> = Vec::new();
        let mut by_pos: Vec<Vec<usize>> = Vec::new();

        let mut gens: Vec<_> = gens
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|g| (self.sugar(&g), g))
            .collect();
        gens.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then_with(|| self.cmp_terms(a.1[0].pos, &a.1[0].mono, b.1[0].pos, &b.1[0].mono))
        });

        let mut queue: std::collections::VecDeque<(i64, Vector<F::Elem>)> = gens.into();
        loop {
            let (sugar, v) = if let Some(g) = queue.pop_front() {
                g
            } else if !pairs.is_empty() {
                let k = (0..pairs.len())
                    .min_by(|&a, &b| {
                        let (p, q) = (&pairs[a], &pairs[b]);
                        p.sugar
                            .cmp(&q.sugar)
                            .then_with(|| self.cmp_terms(p.pos, &p.lcm, q.pos, &q.lcm))
                    })
                    .unwrap();
                let p = pairs.swap_remove(k);
                (p.sugar, self.spoly(&raw[p.i], &raw[p.j], &p.lcm))
            } else {
                break;
            };
            let mut h = self.reduce(v, &raw, &by_pos, false, u32::MAX, None);
            if h.is_empty() {
                continue;
            }
            self.make_monic(&mut h);
            let idx = raw.len();
            let pos = h[0].pos as usize;
            self.update(&els, &raw, &by_pos, &mut pairs, &h, idx, sugar, ideal_mode);
            for &k in by_pos.get(pos).map(|v| v.as_slice()).unwrap_or(&[]) {
                if !els[k].redundant && h[0].mono.divides(&els[k].v[0].mono) {
                    els[k].redundant = true;
                }
            }
            if by_pos.len() <= pos {
                by_pos.resize(pos + 1, Vec::new());
            }
            by_pos[pos].push(idx);
            raw.push(h.clone());
            els.push(Element {
                v: h,
                sugar,
                redundant: false,
            });
        }

        let keep: Vec<Vector<F::Elem>> = els
            .into_iter()
            .filter(|e| !e.redundant)
            .map(|e| e.v)
            .collect();
        self.interreduce(keep)
    }

    fn spoly(&self, a: &[Term<F::Elem>], b: &[Term<F::Elem>], lcm: &Monomial) -> Vector<F::Elem> {
        let f = &self.ring.field;
        let ta = a[0].mono.quotient_of(lcm);
        let tb = b[0].mono.quotient_of(lcm);
        let left = self.mul_term(&a[1..], &ta, &f.one());
        let mut out = Vec::with_capacity(left.len() + b.len());
        self.axpy(&left, &f.neg(&f.one()), &tb, &b[1..], &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn update(
        &self,
        els: &[Element<F::Elem>],
        raw: &[Vector<F::Elem>],
        by_pos: &[Vec<usize>],
        pairs: &mut Vec<Pair>,
        h: &[Term<F::Elem>],
        hidx: usize,
        hsugar: i64,
        ideal_mode: bool,
    ) {
        let hp = h[0].pos;
        let hm = &h[0].mono;
        struct Cand {
            i: usize,
            lcm: Monomial,
            coprime: bool,
            sugar: i64,
        }
        let mut cands: Vec<Cand> = Vec::new();
        for &i in by_pos.get(hp as usize).map(|v| v.as_slice()).unwrap_or(&[]) {
            if els[i].redundant {
                continue;
            }
            let im = &raw[i][0].mono;
            let lcm = im.lcm(hm);
            let sugar = (els[i].sugar + lcm.degree() - im.degree())
                .max(hsugar + lcm.degree() - hm.degree());
            cands.push(Cand {
                i,
                coprime: im.is_coprime(hm),
                lcm,
                sugar,
            });
        }
        // chain criterion on old pairs
        pairs.retain(|p| {
            if p.pos != hp || !hm.divides(&p.lcm) {
                return true;
            }
            let li = raw[p.i][0].mono.lcm(hm);
            let lj = raw[p.j][0].mono.lcm(hm);
            li == p.lcm || lj == p.lcm
        });
        // M: drop candidates whose lcm is properly divisible by another's
        let n = cands.len();
        let mut alive = vec![true; n];
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && alive[b]
                    && cands[b].lcm.divides(&cands[a].lcm)
                    && cands[b].lcm != cands[a].lcm
                {
                    alive[a] = false;
                    break;
                }
            }
        }
        // F: one pair per lcm; with the product criterion a coprime member kills the group
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            let mut group_coprime = cands[a].coprime;
            for b in a + 1..n {
                if alive[b] && cands[b].lcm == cands[a].lcm {
                    group_coprime |= cands[b].coprime;
                    alive[b] = false;
                }
            }
            if ideal_mode && group_coprime {
                alive[a] = false;
            }
        }
        for (a, c) in cands.into_iter().enumerate() {
            if alive[a] {
                pairs.push(Pair {
                    i: c.i,
                    j: hidx,
                    pos: hp,
                    lcm: c.lcm,
                    sugar: c.sugar,
                });
            }
        }
    }

    fn interreduce(&self, mut keep: Vec<Vector<F::Elem>>) -> Vec<Vector<F::Elem>> {
        keep.sort_by(|a, b| self.cmp_terms(a[0].pos, &a[0].mono, b[0].pos, &b[0].mono));
        let by_pos = index_by_pos(&keep);
        let mut out = Vec::with_capacity(keep.len());
        for k in 0..keep.len() {
            let v = keep[k].clone();
            let mut r = Vec::with_capacity(v.len());
            r.push(v[0].clone());
            let tail = self.reduce(v[1..].to_vec(), &keep, &by_pos, true, u32::MAX, Some(k));
            r.extend(tail);
            out.push(r);
        }
        out
    }
}

pub fn index_by_pos<C>(basis: &[Vector<C>]) -> Vec<Vec<usize>> {
    let mut by_pos: Vec<Vec<usize>> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let p = g[0].pos as usize;
        if by_pos.len() <= p {
            by_pos.resize(p + 1, Vec::new());
        }
        by_pos[p].push(k);
    }
    by_pos
}

/// Reduced Groebner basis of an ideal.
pub fn ideal_basis<F: Field>(ring: &PolyRing<F>, gens: &[Poly<F::Elem>]) -> Vec<Poly<F::Elem>> {
    let e = Engine::new(ring, &[]);
    let vs = gens.iter().map(|g| e.from_dense(std::slice::from_ref(g), 0)).collect();
    e.groebner(vs, true)
        .into_iter()
        .map(|v| e.to_dense(&v, 0, 1).pop().unwrap())
        .collect()
}

/// Normal form of `f` modulo a reduced ideal basis.
pub fn ideal_normal_form<F: Field>(
    ring: &PolyRing<F>,
    basis: &[Poly<F::Elem>],
    f: &Poly<F::Elem>,
) -> Poly<F::Elem> {
    let e = Engine::new(ring, &[]);
    let b: Vec<_> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| e.from_dense(std::slice::from_ref(g), 0))
        .collect();
    let by_pos = index_by_pos(&b);
    let v = e.reduce(e.from_dense(std::slice::from_ref(f), 0), &b, &by_pos, true, u32::MAX, None);
    e.to_dense(&v, 0, 1).pop().unwrap()
}

/// S-polynomial of two ideal elements; used by tests and the criterion check.
pub fn s_polynomial<F: Field>(
    ring: &PolyRing<F>,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> Poly<F::Elem> {
    let (am, ac) = a.lead().expect("nonzero");
    let (bm, bc) = b.lead().expect("nonzero");
    let l = am.lcm(bm);
    let f = &ring.field;
    let x = ring.mul_term(a, &am.quotient_of(&l), &f.inv(ac));
    let y = ring.mul_term(b, &bm.quotient_of(&l), &f.inv(bc));
    ring.sub(&x, &y)
}
