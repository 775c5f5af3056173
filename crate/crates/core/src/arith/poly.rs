//! Sparse multivariate polynomials over a field.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use smallvec::SmallVec;

use super::ring::{Field, MonomialOrder, PrimeField, Rationals, Ring, RingDescriptor};
use crate::error::{Error, Result};

pub type Exps = SmallVec<[u16; 6]>;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub Exps);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize, e: u16) -> Self {
        let mut m = Self::one(n);
        m.0[i] = e;
        m
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

pub fn cmp_monomials(order: MonomialOrder, a: &Monomial, b: &Monomial) -> Ordering {
    match order {
        MonomialOrder::Lex => a.0.cmp(&b.0),
        MonomialOrder::GrLex => a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)),
        MonomialOrder::GRevLex => a.degree().cmp(&b.degree()).then_with(|| {
            for (x, y) in a.0.iter().zip(&b.0).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        }),
    }
}

/// Terms sorted strictly descending in the ring's order; no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<C> {
    pub terms: Vec<(Monomial, C)>,
}

impl<C> Poly<C> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub order: MonomialOrder,
    names: Arc<Vec<String>>,
}

impl<F: Field> PartialEq for PolyRing<F> {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.order == o.order && self.names == o.names
    }
}

pub type QQ = PolyRing<Rationals>;
pub type FpPoly = PolyRing<PrimeField>;

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, names: Vec<String>, order: MonomialOrder) -> Result<Self> {
        let r = PolyRing {
            field,
            order,
            names: Arc::new(names),
        };
        r.descriptor().validate()?;
        Ok(r)
    }

    /// The coefficient field itself, as a polynomial ring in no variables.
    pub fn constants(field: F) -> Self {
        PolyRing {
            field,
            order: MonomialOrder::default(),
            names: Arc::new(Vec::new()),
        }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The same ring with one more variable appended.
    pub fn extend(&self, name: &str) -> Self {
        let mut names = (*self.names).clone();
        names.push(name.to_string());
        PolyRing {
            field: self.field.clone(),
            order: self.order,
            names: Arc::new(names),
        }
    }

    /// Embed into a ring with extra trailing variables.
    pub fn embed(&self, a: &Poly<F::Elem>, target: &Self) -> Poly<F::Elem> {
        let n = target.nvars();
        let mut terms: Vec<_> = a
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.resize(n, 0);
                (Monomial(e), c.clone())
            })
            .collect();
        terms.sort_by(|x, y| target.cmp(&y.0, &x.0));
        Poly { terms }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        cmp_monomials(self.order, a, b)
    }

    pub fn var(&self, i: usize) -> Poly<F::Elem> {
        Poly {
            terms: vec![(Monomial::var(self.nvars(), i, 1), self.field.one())],
        }
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        if self.field.is_zero(&c) {
            return Poly { terms: vec![] };
        }
        Poly {
            terms: vec![(Monomial::one(self.nvars()), c)],
        }
    }

    pub fn monomial(&self, m: Monomial, c: F::Elem) -> Poly<F::Elem> {
        if self.field.is_zero(&c) {
            return Poly { terms: vec![] };
        }
        Poly { terms: vec![(m, c)] }
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        if self.field.is_zero(c) {
            return Poly { terms: vec![] };
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), self.field.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul_term(&self, a: &Poly<F::Elem>, m: &Monomial, c: &F::Elem) -> Poly<F::Elem> {
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(n, x)| (n.mul(m), self.field.mul(x, c)))
                .collect(),
        }
    }

    /// Leading coefficient normalized to one.
    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.lead() {
            Some((_, c)) if !self.field.is_one(c) => self.scale(a, &self.field.inv(c)),
            _ => a.clone(),
        }
    }

    pub fn total_degree(&self, a: &Poly<F::Elem>) -> Option<i64> {
        a.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_constant(&self, a: &Poly<F::Elem>) -> bool {
        a.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, a: &Poly<F::Elem>, i: usize) -> Option<i64> {
        a.terms.iter().map(|(m, _)| m.0[i] as i64).max()
    }

    /// Division with remainder in one variable; only for univariate rings.
    pub fn univariate_div_rem(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>) {
        assert!(self.nvars() <= 1 && !b.is_zero());
        let (bm, bc) = b.lead().unwrap();
        let binv = self.field.inv(bc);
        let mut q = Poly { terms: vec![] };
        let mut r = a.clone();
        while let Some((rm, rc)) = r.lead() {
            if !bm.divides(rm) {
                break;
            }
            let m = bm.quotient_of(rm);
            let c = self.field.mul(rc, &binv);
            let t = self.monomial(m.clone(), c.clone());
            q = self.add(&q, &t);
            r = self.sub(&r, &self.mul_term(b, &m, &c));
        }
        (q, r)
    }

    fn merge(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>, negate_b: bool) -> Poly<F::Elem> {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        let bval = |c: &F::Elem| if negate_b { f.neg(c) } else { c.clone() };
        while i < a.terms.len() && j < b.terms.len() {
            match self.cmp(&a.terms[i].0, &b.terms[j].0) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.terms[j].0.clone(), bval(&b.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_b {
                        f.sub(&a.terms[i].1, &b.terms[j].1)
                    } else {
                        f.add(&a.terms[i].1, &b.terms[j].1)
                    };
                    if !f.is_zero(&c) {
                        out.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        out.extend(b.terms[j..].iter().map(|(m, c)| (m.clone(), bval(c))));
        Poly { terms: out }
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        parts.join("*")
    }
}

impl<F: Field> Ring for PolyRing<F> {
    type Elem = Poly<F::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly { terms: vec![] }
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.field.one())
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.constant(self.field.from_i64(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.merge(a, b, false)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.merge(a, b, true)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return self.mul_term(big, m, c);
        }
        let mut prods: Vec<(Monomial, F::Elem)> = Vec::with_capacity(a.len() * b.len());
        for (m, c) in &small.terms {
            for (n, d) in &big.terms {
                prods.push((m.mul(n), self.field.mul(c, d)));
            }
        }
        prods.sort_by(|x, y| self.cmp(&y.0, &x.0));
        let mut out: Vec<(Monomial, F::Elem)> = Vec::with_capacity(prods.len());
        for (m, c) in prods {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = self.field.add(lc, &c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if self.field.is_zero(lc) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if self.field.is_zero(lc) {
                out.pop();
            }
        }
        Poly { terms: out }
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        a.terms.len() == 1 && a.terms[0].0.is_one() && self.field.is_one(&a.terms[0].1)
    }
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.terms.len() == 1 && a.terms[0].0.is_one() {
            Some(self.constant(self.field.inv(&a.terms[0].1)))
        } else {
            None
        }
    }
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if b.is_zero() {
            return a.is_zero().then(|| self.zero());
        }
        let (bm, bc) = b.lead().unwrap();
        let binv = self.field.inv(bc);
        let mut q = Vec::new();
        let mut r = a.clone();
        while let Some((rm, rc)) = r.lead() {
            if !bm.divides(rm) {
                return None;
            }
            let m = bm.quotient_of(rm);
            let c = self.field.mul(rc, &binv);
            r = self.sub(&r, &self.mul_term(b, &m, &c));
            q.push((m, c));
        }
        Some(Poly { terms: q })
    }
    fn homogeneous_degree(&self, a: &Self::Elem) -> Option<i64> {
        let d = a.lead()?.0.degree();
        a.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }
    fn is_field(&self) -> bool {
        self.nvars() == 0
    }
    fn is_multivariate(&self) -> bool {
        self.nvars() >= 2
    }
    fn nvars(&self) -> usize {
        PolyRing::nvars(self)
    }
    fn format_elem(&self, a: &Self::Elem) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut s = String::new();
        for (k, (m, c)) in a.terms.iter().enumerate() {
            let neg = f.is_negative(c);
            let abs = if neg { f.neg(c) } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&f.format(&abs));
            } else if f.is_one(&abs) {
                s.push_str(&self.format_monomial(m));
            } else {
                s.push_str(&f.format(&abs));
                s.push('*');
                s.push_str(&self.format_monomial(m));
            }
        }
        s
    }
    fn parse_elem(&self, s: &str) -> Result<Self::Elem> {
        let mut p = Parser {
            ring: self,
            src: s.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(v)
    }
    fn descriptor(&self) -> RingDescriptor {
        if self.nvars() == 0 {
            return match self.field.base() {
                super::ring::BaseField::Rationals => RingDescriptor::Rationals,
                super::ring::BaseField::PrimeField(p) => RingDescriptor::PrimeField { p },
            };
        }
        RingDescriptor::PolynomialRing {
            base: self.field.base(),
            variables: (*self.names).clone(),
            order: self.order,
        }
    }
}

/// Recursive-descent parser for `3*x^2*y - 1/2`, parentheses allowed.
struct Parser<'a, F: Field> {
    ring: &'a PolyRing<F>,
    src: &'a [u8],
    pos: usize,
}

impl<F: Field> Parser<'_, F> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly<F::Elem>> {
        let r = self.ring;
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.add(&acc, &t);
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.sub(&acc, &t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<F::Elem>> {
        let r = self.ring;
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = r.mul(&acc, &f);
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.unary()?;
                    match r.unit_inverse(&f) {
                        Some(inv) => acc = r.mul(&acc, &inv),
                        None => {
                            self.pos = at;
                            return Err(self.err("division by a non-constant or zero"));
                        }
                    }
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly<F::Elem>> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(self.ring.neg(&v))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly<F::Elem>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.number()?;
            let e = e
                .to_u32()
                .filter(|&e| e <= u16::MAX as u32)
                .ok_or_else(|| self.err("exponent out of range"))?;
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Poly<F::Elem>> {
        let r = self.ring;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let c = r.field.from_ratio(&n, &BigInt::one()).unwrap();
                Ok(r.constant(c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match r.names.iter().position(|v| v == name) {
                    Some(i) => Ok(r.var(i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable `{name}`")))
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qxy() -> QQ {
        PolyRing::new(Rationals, vec!["x".into(), "y".into()], MonomialOrder::GRevLex).unwrap()
    }

    #[test]
    fn parse_format_round_trip() {
        let r = qxy();
        for s in ["3*x^2*y - 1/2", "x + y", "-x^3 + 2*x*y - y^2", "0", "1", "-7/3*y"] {
            let p = r.parse_elem(s).unwrap();
            assert_eq!(r.format_elem(&p), s);
        }
        let p = r.parse_elem("(x+y)^2 - x*(x + 2*y)").unwrap();
        assert_eq!(r.format_elem(&p), "y^2");
    }

    #[test]
    fn parse_errors_carry_columns() {
        let r = qxy();
        match r.parse_elem("x + z") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(r.parse_elem("x / y").is_err());
    }

    #[test]
    fn grevlex_orders_by_degree_then_reverse() {
        let r = PolyRing::new(
            Rationals,
            vec!["x".into(), "y".into(), "z".into()],
            MonomialOrder::GRevLex,
        )
        .unwrap();
        let m = |a: u16, b: u16, c: u16| Monomial(SmallVec::from_slice(&[a, b, c]));
        // x*z < y^2 in grevlex, the reverse in lex
        assert_eq!(r.cmp(&m(1, 0, 1), &m(0, 2, 0)), Ordering::Less);
        assert_eq!(
            cmp_monomials(MonomialOrder::Lex, &m(1, 0, 1), &m(0, 2, 0)),
            Ordering::Greater
        );
    }

    #[test]
    fn exact_division() {
        let r = qxy();
        let a = r.parse_elem("x^2 - y^2").unwrap();
        let b = r.parse_elem("x + y").unwrap();
        assert_eq!(r.exact_div(&a, &b), Some(r.parse_elem("x - y").unwrap()));
        assert_eq!(r.exact_div(&b, &a), None);
    }

    #[test]
    fn prime_field_coefficients() {
        let r = PolyRing::new(PrimeField::new(5).unwrap(), vec!["x".into()], MonomialOrder::Lex)
            .unwrap();
        let p = r.parse_elem("1/2*x - 1").unwrap();
        assert_eq!(r.format_elem(&p), "3*x + 4");
    }
}
