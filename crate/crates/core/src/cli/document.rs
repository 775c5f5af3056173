//! The line-oriented input format.
//!
//! ```text
//! koszulkit 1
//! ring polynomial Q x,y grevlex
//! poly f = x^2 + y
//! sequence s = a: x; b: y
//! matrix m = 2x1 [-y; x]
//! complex k low 0 ranks 1,2,1
//!   d 1 = 1x2 [x, y]
//!   d 2 = 2x1 [-y; x]
//! end
//! chainmap g : k -> k
//!   at 0 = 1x1 [2]
//! end
//! cube c dirs a,b
//!   vertex {} rank 1 grading 0
//!   vertex {a} rank 1 relations 1x1 [y] grading 1
//!   edge {a} a = 1x1 [x]
//! end
//! cubemap h : c -> c
//!   at {} = 1x1 [1]
//! end
//! double X low 0
//!   entry 0 = k
//!   entry 1 = k
//!   d 1 = g
//! end
//! suite nightly seed 42 count 10 bound 16
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Missing vertices are
//! zero, missing edges and differentials are zero maps.

use std::collections::BTreeMap;

use super::ring::{dispatch, AnyRing};
use crate::arith::{ExactRing, Matrix, RingDescriptor};
use crate::complexes::{ChainComplex, ChainMap};
use crate::cubes::{Cube, CubeMap, DirectionSet, Subset};
use crate::error::{Error, Result};
use crate::fpmodules::PresentedModule;
use crate::witness::DoubleComplex;

pub const VERSION: u32 = 1;

/// A piece of text with its 1-based position in the document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Spanned {
    fn new(text: &str, line: usize, column: usize) -> Self {
        Spanned {
            text: text.to_string(),
            line,
            column,
        }
    }

    /// Re-anchor an error raised while parsing this text.
    fn locate(&self, e: Error) -> Error {
        match e {
            Error::Parse { column, message, .. } => Error::parse(self.line, self.column + column - 1, message),
            Error::UnresolvedReference(_) => e,
            other => Error::parse(self.line, self.column, other.to_string()),
        }
    }

    fn matrix<R: ExactRing>(&self, ring: &R) -> Result<Matrix<R>> {
        Matrix::from_text(ring, &self.text).map_err(|e| self.locate(e))
    }

    fn elem<R: ExactRing>(&self, ring: &R) -> Result<R::Elem> {
        ring.parse_elem(&self.text).map_err(|e| self.locate(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSpec {
    pub subset: Vec<String>,
    pub rank: usize,
    pub relations: Option<Spanned>,
    pub grading: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub count: usize,
    pub bound: Option<u32>,
    pub mutation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entity {
    Poly(Spanned),
    Sequence(Vec<(String, Spanned)>),
    Matrix(Spanned),
    Complex {
        low: i64,
        ranks: Vec<usize>,
        diffs: Vec<(i64, Spanned)>,
    },
    ChainMap {
        dom: Spanned,
        cod: Spanned,
        comps: Vec<(i64, Spanned)>,
    },
    Cube {
        dirs: Vec<String>,
        vertices: Vec<VertexSpec>,
        edges: Vec<(Vec<String>, String, Spanned)>,
    },
    CubeMap {
        dom: Spanned,
        cod: Spanned,
        comps: Vec<(Vec<String>, Spanned)>,
    },
    Double {
        low: i64,
        entries: Vec<(i64, Spanned)>,
        diffs: Vec<(i64, Spanned)>,
    },
    Suite(SuiteConfig),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Poly(_) => "poly",
            Entity::Sequence(_) => "sequence",
            Entity::Matrix(_) => "matrix",
            Entity::Complex { .. } => "complex",
            Entity::ChainMap { .. } => "chainmap",
            Entity::Cube { .. } => "cube",
            Entity::CubeMap { .. } => "cubemap",
            Entity::Double { .. } => "double",
            Entity::Suite(_) => "suite",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub version: u32,
    pub ring: RingDescriptor,
    /// In document order.
    pub entities: Vec<(String, Entity)>,
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        let l = self.lines.get(self.pos).copied();
        self.pos += 1;
        l
    }
}

/// Column (1-based) of `part` inside `line`; `part` must be a subslice.
fn col(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Splits off the first whitespace-separated word.
fn word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim_start()),
        None => (s, ""),
    }
}

fn list<T: std::str::FromStr>(s: &str, line: usize, column: usize, what: &str) -> Result<Vec<T>> {
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::parse(line, column, format!("bad {what} `{t}`"))))
        .collect()
}

fn labels(s: &str, line: usize, column: usize) -> Result<Vec<String>> {
    let v: Vec<String> = list(s, line, column, "label")?;
    match v.iter().find(|l| !is_identifier(l)) {
        Some(l) => Err(Error::parse(line, column, format!("bad label `{l}`"))),
        None => Ok(v),
    }
}

/// `{a,b}` to labels.
fn subset(s: &str, line: usize, column: usize) -> Result<Vec<String>> {
    let inner = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::parse(line, column, format!("expected a subset `{{...}}`, found `{s}`")))?;
    labels(inner.trim(), line, column + 1)
}

fn keyword(s: &str, kw: &str, line: usize, column: usize) -> Result<()> {
    if s == kw {
        Ok(())
    } else {
        Err(Error::parse(line, column, format!("expected `{kw}`, found `{s}`")))
    }
}

fn number<T: std::str::FromStr>(s: &str, line: usize, column: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::parse(line, column, format!("bad {what} `{s}`")))
}

/// `lhs = rhs` with the position of `rhs`.
fn assignment<'a>(line: &'a str, rest: &'a str, n: usize) -> Result<(&'a str, &'a str)> {
    let (lhs, rhs) = rest
        .split_once('=')
        .ok_or_else(|| Error::parse(n, col(line, rest), "expected `=`"))?;
    let rhs = rhs.trim();
    if rhs.is_empty() {
        return Err(Error::parse(n, col(line, rest) + rest.len(), "missing value after `=`"));
    }
    Ok((lhs.trim(), rhs))
}

fn block<'a>(ls: &mut Lines<'a>, start: usize, name: &str) -> Result<Vec<(usize, &'a str)>> {
    let mut out = Vec::new();
    loop {
        match ls.next() {
            None => return Err(Error::parse(start, 1, format!("block `{name}` is missing `end`"))),
            Some((_, l)) if l.trim() == "end" => return Ok(out),
            Some(x) => out.push(x),
        }
    }
}

/// Syntax only; references and ring-level content are checked by
/// `parse_document`.
pub fn parse_syntax(src: &str) -> Result<Document> {
    let lines: Vec<(usize, &str)> = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .collect();
    let mut ls = Lines { lines, pos: 0 };
    let (n, header) = ls.next().ok_or_else(|| Error::parse(1, 1, "empty document"))?;
    let (magic, v) = word(header);
    keyword(magic, "koszulkit", n, 1)?;
    let version: u32 = number(v.trim(), n, col(header, v), "version")?;
    if version != VERSION {
        return Err(Error::parse(n, col(header, v), format!("unsupported version {version}")));
    }
    let (n, rl) = ls.next().ok_or_else(|| Error::parse(n + 1, 1, "missing ring line"))?;
    let (kw, desc) = word(rl);
    keyword(kw, "ring", n, col(rl, kw))?;
    let ring = RingDescriptor::from_text(desc).map_err(|e| Error::parse(n, col(rl, desc), e.to_string()))?;
    let mut entities: Vec<(String, Entity)> = Vec::new();
    while let Some((n, line)) = ls.next() {
        let (kind, rest) = word(line);
        let (name, rest) = word(rest);
        if !is_identifier(name) {
            return Err(Error::parse(n, col(line, name.get(..0).unwrap_or(rest)), format!("bad name `{name}`")));
        }
        if entities.iter().any(|(m, _)| m == name) {
            return Err(Error::parse(n, col(line, name), format!("duplicate name `{name}`")));
        }
        let e = match kind {
            "poly" => {
                let (_, rhs) = assignment(line, rest, n)?;
                Entity::Poly(Spanned::new(rhs, n, col(line, rhs)))
            }
            "matrix" => {
                let (_, rhs) = assignment(line, rest, n)?;
                Entity::Matrix(Spanned::new(rhs, n, col(line, rhs)))
            }
            "sequence" => {
                let (_, rhs) = assignment(line, rest, n)?;
                let mut items = Vec::new();
                for part in rhs.split(';') {
                    let (l, f) = part
                        .split_once(':')
                        .ok_or_else(|| Error::parse(n, col(line, part), "expected `label: element`"))?;
                    let (l, f) = (l.trim(), f.trim());
                    if !is_identifier(l) {
                        return Err(Error::parse(n, col(line, part), format!("bad label `{l}`")));
                    }
                    items.push((l.to_string(), Spanned::new(f, n, col(line, f))));
                }
                Entity::Sequence(items)
            }
            "complex" => {
                let (kw, r) = word(rest);
                keyword(kw, "low", n, col(line, kw))?;
                let (lo, r) = word(r);
                let low = number(lo, n, col(line, lo), "degree")?;
                let (kw, r) = word(r);
                keyword(kw, "ranks", n, col(line, kw))?;
                let ranks = list(r.trim(), n, col(line, r), "rank")?;
                let mut diffs = Vec::new();
                for (m, l) in block(&mut ls, n, name)? {
                    let (kw, r) = word(l);
                    keyword(kw, "d", m, col(l, kw))?;
                    let (deg, rhs) = assignment(l, r, m)?;
                    diffs.push((number(deg, m, col(l, r), "degree")?, Spanned::new(rhs, m, col(l, rhs))));
                }
                Entity::Complex { low, ranks, diffs }
            }
            "chainmap" | "cubemap" => {
                let (colon, r) = word(rest);
                keyword(colon, ":", n, col(line, colon))?;
                let (dom, r) = word(r);
                let (arrow, cod) = word(r);
                keyword(arrow, "->", n, col(line, arrow))?;
                let cod = cod.trim();
                let (dom, cod) = (Spanned::new(dom, n, col(line, dom)), Spanned::new(cod, n, col(line, cod)));
                let body = block(&mut ls, n, name)?;
                if kind == "chainmap" {
                    let mut comps = Vec::new();
                    for (m, l) in body {
                        let (kw, r) = word(l);
                        keyword(kw, "at", m, col(l, kw))?;
                        let (deg, rhs) = assignment(l, r, m)?;
                        comps.push((number(deg, m, col(l, r), "degree")?, Spanned::new(rhs, m, col(l, rhs))));
                    }
                    Entity::ChainMap { dom, cod, comps }
                } else {
                    let mut comps = Vec::new();
                    for (m, l) in body {
                        let (kw, r) = word(l);
                        keyword(kw, "at", m, col(l, kw))?;
                        let (t, rhs) = assignment(l, r, m)?;
                        comps.push((subset(t, m, col(l, r))?, Spanned::new(rhs, m, col(l, rhs))));
                    }
                    Entity::CubeMap { dom, cod, comps }
                }
            }
            "cube" => {
                let (kw, r) = word(rest);
                keyword(kw, "dirs", n, col(line, kw))?;
                let dirs = labels(r.trim(), n, col(line, r))?;
                let mut vertices = Vec::new();
                let mut edges = Vec::new();
                for (m, l) in block(&mut ls, n, name)? {
                    let (kw, r) = word(l);
                    match kw {
                        "vertex" => vertices.push(vertex(l, r, m)?),
                        "edge" => {
                            let (lhs, rhs) = assignment(l, r, m)?;
                            let (t, k) = word(lhs);
                            let t = subset(t, m, col(l, r))?;
                            edges.push((t, k.trim().to_string(), Spanned::new(rhs, m, col(l, rhs))));
                        }
                        _ => return Err(Error::parse(m, col(l, kw), format!("expected `vertex` or `edge`, found `{kw}`"))),
                    }
                }
                Entity::Cube { dirs, vertices, edges }
            }
            "double" => {
                let (kw, r) = word(rest);
                keyword(kw, "low", n, col(line, kw))?;
                let low = number(r.trim(), n, col(line, r), "degree")?;
                let mut entries = Vec::new();
                let mut diffs = Vec::new();
                for (m, l) in block(&mut ls, n, name)? {
                    let (kw, r) = word(l);
                    let (deg, rhs) = assignment(l, r, m)?;
                    let p = number(deg, m, col(l, r), "degree")?;
                    let s = Spanned::new(rhs, m, col(l, rhs));
                    match kw {
                        "entry" => entries.push((p, s)),
                        "d" => diffs.push((p, s)),
                        _ => return Err(Error::parse(m, col(l, kw), format!("expected `entry` or `d`, found `{kw}`"))),
                    }
                }
                Entity::Double { low, entries, diffs }
            }
            "suite" => {
                let mut cfg = SuiteConfig {
                    seed: 0,
                    count: 0,
                    bound: None,
                    mutation: None,
                };
                let mut r = rest;
                while !r.is_empty() {
                    let (k, t) = word(r);
                    let (v, t) = word(t);
                    let c = col(line, v.get(..0).unwrap_or(k));
                    match k {
                        "seed" => cfg.seed = number(v, n, c, "seed")?,
                        "count" => cfg.count = number(v, n, c, "count")?,
                        "bound" => cfg.bound = Some(number(v, n, c, "bound")?),
                        "mutation" => cfg.mutation = Some(v.to_string()),
                        _ => return Err(Error::parse(n, col(line, k), format!("unknown suite field `{k}`"))),
                    }
                    r = t;
                }
                Entity::Suite(cfg)
            }
            _ => return Err(Error::parse(n, col(line, kind), format!("unknown entity kind `{kind}`"))),
        };
        entities.push((name.to_string(), e));
    }
    Ok(Document { version, ring, entities })
}

fn vertex(l: &str, r: &str, m: usize) -> Result<VertexSpec> {
    let (t, mut rest) = word(r);
    let subset = subset(t, m, col(l, t))?;
    let mut v = VertexSpec {
        subset,
        rank: 0,
        relations: None,
        grading: None,
    };
    while !rest.is_empty() {
        let (k, t) = word(rest);
        match k {
            "rank" => {
                let (x, t) = word(t);
                v.rank = number(x, m, col(l, x), "rank")?;
                rest = t;
            }
            "grading" => {
                let (x, t) = word(t);
                v.grading = Some(list(x, m, col(l, x), "degree")?);
                rest = t;
            }
            "relations" => {
                // a matrix runs up to its closing bracket
                let end = t.find(']').ok_or_else(|| Error::parse(m, col(l, t), "expected `]`"))?;
                let x = &t[..=end];
                v.relations = Some(Spanned::new(x, m, col(l, x)));
                rest = t[end + 1..].trim_start();
            }
            _ => return Err(Error::parse(m, col(l, k), format!("unknown vertex field `{k}`"))),
        }
    }
    Ok(v)
}

fn fmt_subset(t: &[String]) -> String {
    format!("{{{}}}", t.join(","))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Document {
    pub fn new(ring: RingDescriptor) -> Self {
        Document {
            version: VERSION,
            ring,
            entities: vec![],
        }
    }

    pub fn get(&self, name: &str) -> Result<&Entity> {
        self.entities
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::UnresolvedReference(name.to_string()))
    }

    /// `name` if given, otherwise the only entity of that kind.
    pub fn pick(&self, kind: &str, name: Option<&str>) -> Result<String> {
        if let Some(n) = name {
            let e = self.get(n)?;
            if e.kind() != kind {
                return Err(Error::Invalid(format!("`{n}` is a {}, not a {kind}", e.kind())));
            }
            return Ok(n.to_string());
        }
        let all: Vec<&String> = self.entities.iter().filter(|(_, e)| e.kind() == kind).map(|(n, _)| n).collect();
        match all.as_slice() {
            [one] => Ok(one.to_string()),
            [] => Err(Error::Invalid(format!("the document has no {kind}"))),
            _ => Err(Error::Invalid(format!("the document has several {kind}s; name one"))),
        }
    }

    fn reference(&self, s: &Spanned, kind: &str) -> Result<()> {
        match self.get(&s.text) {
            Ok(e) if e.kind() == kind => Ok(()),
            Ok(e) => Err(Error::parse(s.line, s.column, format!("`{}` is a {}, not a {kind}", s.text, e.kind()))),
            Err(_) => Err(Error::UnresolvedReference(s.text.clone())),
        }
    }

    /// Canonical serialization.
    pub fn to_text(&self) -> String {
        let mut out = format!("koszulkit {}\nring {}\n", self.version, self.ring.to_text());
        for (name, e) in &self.entities {
            match e {
                Entity::Poly(s) => out += &format!("poly {name} = {}\n", s.text),
                Entity::Matrix(s) => out += &format!("matrix {name} = {}\n", s.text),
                Entity::Sequence(items) => {
                    let parts: Vec<String> = items.iter().map(|(l, f)| format!("{l}: {}", f.text)).collect();
                    out += &format!("sequence {name} = {}\n", parts.join("; "));
                }
                Entity::Complex { low, ranks, diffs } => {
                    out += &format!("complex {name} low {low} ranks {}\n", join(ranks));
                    for (d, m) in diffs {
                        out += &format!("  d {d} = {}\n", m.text);
                    }
                    out += "end\n";
                }
                Entity::ChainMap { dom, cod, comps } => {
                    out += &format!("chainmap {name} : {} -> {}\n", dom.text, cod.text);
                    for (d, m) in comps {
                        out += &format!("  at {d} = {}\n", m.text);
                    }
                    out += "end\n";
                }
                Entity::Cube { dirs, vertices, edges } => {
                    out += &format!("cube {name} dirs {}\n", dirs.join(","));
                    for v in vertices {
                        out += &format!("  vertex {} rank {}", fmt_subset(&v.subset), v.rank);
                        if let Some(r) = &v.relations {
                            out += &format!(" relations {}", r.text);
                        }
                        if let Some(g) = &v.grading {
                            out += &format!(" grading {}", join(g));
                        }
                        out += "\n";
                    }
                    for (t, k, m) in edges {
                        out += &format!("  edge {} {k} = {}\n", fmt_subset(t), m.text);
                    }
                    out += "end\n";
                }
                Entity::CubeMap { dom, cod, comps } => {
                    out += &format!("cubemap {name} : {} -> {}\n", dom.text, cod.text);
                    for (t, m) in comps {
                        out += &format!("  at {} = {}\n", fmt_subset(t), m.text);
                    }
                    out += "end\n";
                }
                Entity::Double { low, entries, diffs } => {
                    out += &format!("double {name} low {low}\n");
                    for (p, s) in entries {
                        out += &format!("  entry {p} = {}\n", s.text);
                    }
                    for (p, s) in diffs {
                        out += &format!("  d {p} = {}\n", s.text);
                    }
                    out += "end\n";
                }
                Entity::Suite(c) => {
                    out += &format!("suite {name} seed {} count {}", c.seed, c.count);
                    if let Some(b) = c.bound {
                        out += &format!(" bound {b}");
                    }
                    if let Some(m) = &c.mutation {
                        out += &format!(" mutation {m}");
                    }
                    out += "\n";
                }
            }
        }
        out
    }

    pub fn ring(&self) -> Result<AnyRing> {
        AnyRing::from_descriptor(&self.ring)
    }

    /// Resolve references, parse every element and matrix in the ring,
    /// build every object, and rewrite the text in canonical form.
    fn canonicalize(&mut self) -> Result<()> {
        let ring = self.ring()?;
        let snapshot = self.clone();
        for (name, e) in &snapshot.entities {
            match e {
                Entity::ChainMap { dom, cod, .. } => {
                    self.reference(dom, "complex")?;
                    self.reference(cod, "complex")?;
                }
                Entity::CubeMap { dom, cod, .. } => {
                    self.reference(dom, "cube")?;
                    self.reference(cod, "cube")?;
                }
                Entity::Double { entries, diffs, .. } => {
                    for (_, s) in entries {
                        self.reference(s, "complex")?;
                    }
                    for (_, s) in diffs {
                        self.reference(s, "chainmap")?;
                    }
                }
                _ => {}
            }
            let canon = dispatch!(&ring, r => snapshot.canonical_entity(r, name, e))?;
            if let Some((_, slot)) = self.entities.iter_mut().find(|(n, _)| n == name) {
                *slot = canon;
            }
        }
        Ok(())
    }

    fn canonical_entity<R: ExactRing>(&self, ring: &R, name: &str, e: &Entity) -> Result<Entity> {
        let mt = |s: &Spanned| -> Result<Spanned> { Ok(Spanned { text: s.matrix(ring)?.to_text(), ..s.clone() }) };
        Ok(match e {
            Entity::Poly(s) => Entity::Poly(Spanned { text: ring.format_elem(&s.elem(ring)?), ..s.clone() }),
            Entity::Matrix(s) => Entity::Matrix(mt(s)?),
            Entity::Sequence(items) => Entity::Sequence(
                items
                    .iter()
                    .map(|(l, f)| Ok((l.clone(), Spanned { text: ring.format_elem(&f.elem(ring)?), ..f.clone() })))
                    .collect::<Result<_>>()?,
            ),
            Entity::Complex { .. } => {
                let x = self.complex(ring, name)?;
                let Entity::Complex { low, ranks, diffs } = e else { unreachable!() };
                let mut diffs: Vec<(i64, Spanned)> = diffs
                    .iter()
                    .filter(|(d, _)| !x.d(*d).is_zero())
                    .map(|(d, m)| Ok((*d, mt(m)?)))
                    .collect::<Result<_>>()?;
                diffs.sort_by_key(|t| t.0);
                Entity::Complex { low: *low, ranks: ranks.clone(), diffs }
            }
            Entity::ChainMap { dom, cod, comps } => {
                self.chain_map(ring, name)?;
                let mut comps: Vec<(i64, Spanned)> = comps.iter().map(|(d, m)| Ok((*d, mt(m)?))).collect::<Result<_>>()?;
                comps.sort_by_key(|t| t.0);
                Entity::ChainMap { dom: dom.clone(), cod: cod.clone(), comps }
            }
            Entity::Cube { dirs, .. } => {
                let x = self.cube(ring, name)?;
                cube_entity(&x, dirs)
            }
            Entity::CubeMap { dom, cod, .. } => {
                let f = self.cube_map(ring, name)?;
                let d = f.dom.dirs();
                let comps = d
                    .subsets()
                    .map(|t| (d.labels_of(t), Spanned::new(&f.maps[t as usize].to_text(), 0, 0)))
                    .collect();
                Entity::CubeMap { dom: dom.clone(), cod: cod.clone(), comps }
            }
            Entity::Double { low, entries, diffs } => {
                self.double(ring, name)?;
                let mut entries = entries.clone();
                entries.sort_by_key(|t| t.0);
                let mut diffs = diffs.clone();
                diffs.sort_by_key(|t| t.0);
                Entity::Double { low: *low, entries, diffs }
            }
            Entity::Suite(c) => Entity::Suite(c.clone()),
        })
    }

    pub fn elem<R: ExactRing>(&self, ring: &R, name: &str) -> Result<R::Elem> {
        match self.get(name)? {
            Entity::Poly(s) => s.elem(ring),
            e => Err(Error::Invalid(format!("`{name}` is a {}, not a poly", e.kind()))),
        }
    }

    pub fn matrix<R: ExactRing>(&self, ring: &R, name: &str) -> Result<Matrix<R>> {
        match self.get(name)? {
            Entity::Matrix(s) => s.matrix(ring),
            e => Err(Error::Invalid(format!("`{name}` is a {}, not a matrix", e.kind()))),
        }
    }

    /// Labels and elements of a sequence.
    pub fn sequence<R: ExactRing>(&self, ring: &R, name: &str) -> Result<(Vec<String>, Vec<R::Elem>)> {
        match self.get(name)? {
            Entity::Sequence(items) => {
                let labels = items.iter().map(|(l, _)| l.clone()).collect();
                let elems = items.iter().map(|(_, f)| f.elem(ring)).collect::<Result<_>>()?;
                Ok((labels, elems))
            }
            e => Err(Error::Invalid(format!("`{name}` is a {}, not a sequence", e.kind()))),
        }
    }

    pub fn complex<R: ExactRing>(&self, ring: &R, name: &str) -> Result<ChainComplex<R>> {
        let Entity::Complex { low, ranks, diffs } = self.get(name)? else {
            return Err(Error::Invalid(format!("`{name}` is not a complex")));
        };
        let mut ds: BTreeMap<i64, Matrix<R>> = BTreeMap::new();
        for (d, m) in diffs {
            if ds.insert(*d, m.matrix(ring)?).is_some() {
                return Err(Error::parse(m.line, 1, format!("differential {d} given twice")));
            }
        }
        let hi = *low + ranks.len() as i64 - 1;
        for (d, m) in diffs {
            if *d < *low || *d > hi + 1 {
                return Err(Error::parse(m.line, m.column, format!("differential {d} outside the complex")));
            }
        }
        let rank = |n: i64| -> usize {
            if n < *low || n > hi {
                0
            } else {
                ranks[(n - low) as usize]
            }
        };
        let pos = diffs.first().map_or((0, 0), |(_, m)| (m.line, m.column));
        ChainComplex::from_fn(ring, *low, hi, rank, |n| {
            ds.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(ring, rank(n - 1), rank(n)))
        })
        .map_err(|e| Error::parse(pos.0.max(1), pos.1.max(1), format!("complex `{name}`: {e}")))
    }

    pub fn chain_map<R: ExactRing>(&self, ring: &R, name: &str) -> Result<ChainMap<R>> {
        let Entity::ChainMap { dom, cod, comps } = self.get(name)? else {
            return Err(Error::Invalid(format!("`{name}` is not a chain map")));
        };
        let (x, y) = (self.complex(ring, &dom.text)?, self.complex(ring, &cod.text)?);
        let mut cs: BTreeMap<i64, Matrix<R>> = BTreeMap::new();
        for (d, m) in comps {
            cs.insert(*d, m.matrix(ring)?);
        }
        ChainMap::new(x.clone(), y.clone(), |n| {
            cs.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(ring, y.rank(n), x.rank(n)))
        })
        .map_err(|e| Error::parse(dom.line, dom.column, format!("chain map `{name}`: {e}")))
    }

    pub fn cube<R: ExactRing>(&self, ring: &R, name: &str) -> Result<Cube<R>> {
        let Entity::Cube { dirs, vertices, edges } = self.get(name)? else {
            return Err(Error::Invalid(format!("`{name}` is not a cube")));
        };
        let ds = DirectionSet::new(dirs.clone())?;
        let mut vs: Vec<Option<PresentedModule<R>>> = vec![None; 1 << ds.len()];
        for v in vertices {
            let t = ds.mask_of(&v.subset)?;
            let rel = match &v.relations {
                Some(s) => s.matrix(ring)?,
                None => Matrix::zeros(ring, v.rank, 0),
            };
            if rel.rows() != v.rank {
                return Err(Error::Dimension(format!(
                    "vertex {} of `{name}` has rank {} but {} relation rows",
                    fmt_subset(&v.subset),
                    v.rank,
                    rel.rows()
                )));
            }
            let m = match &v.grading {
                Some(g) => PresentedModule::with_grading(rel, g.clone())?,
                None => PresentedModule::new(rel),
            };
            if vs[t as usize].replace(m).is_some() {
                return Err(Error::Invalid(format!("vertex {} of `{name}` given twice", fmt_subset(&v.subset))));
            }
        }
        let vs: Vec<PresentedModule<R>> = vs.into_iter().map(|v| v.unwrap_or_else(|| PresentedModule::free(ring, 0))).collect();
        let mut es: BTreeMap<(Subset, usize), Matrix<R>> = BTreeMap::new();
        for (t, k, m) in edges {
            let mask = ds.mask_of(t)?;
            let kk = ds.index(k).ok_or_else(|| Error::UnresolvedReference(k.clone()))?;
            if mask >> kk & 1 == 0 {
                return Err(Error::parse(m.line, m.column, format!("edge {} {k} leaves a vertex without `{k}`", fmt_subset(t))));
            }
            es.insert((mask, kk), m.matrix(ring)?);
        }
        Cube::new(ring, ds, vs.clone(), |t, k| {
            es.get(&(t, k)).cloned().unwrap_or_else(|| Matrix::zeros(ring, vs[(t & !(1 << k)) as usize].ngens(), vs[t as usize].ngens()))
        })
        .map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::Invalid(format!("cube `{name}`: {other}")),
        })
    }

    pub fn cube_map<R: ExactRing>(&self, ring: &R, name: &str) -> Result<CubeMap<R>> {
        let Entity::CubeMap { dom, cod, comps } = self.get(name)? else {
            return Err(Error::Invalid(format!("`{name}` is not a cube map")));
        };
        let (x, y) = (self.cube(ring, &dom.text)?, self.cube(ring, &cod.text)?);
        if x.dirs() != y.dirs() {
            return Err(Error::Invalid(format!("cube map `{name}`: ends have different directions")));
        }
        let mut cs: BTreeMap<Subset, Matrix<R>> = BTreeMap::new();
        for (t, m) in comps {
            cs.insert(x.dirs().mask_of(t)?, m.matrix(ring)?);
        }
        CubeMap::new(x.clone(), y.clone(), |t| {
            cs.get(&t).cloned().unwrap_or_else(|| Matrix::zeros(ring, y.rank(t), x.rank(t)))
        })
        .map_err(|e| Error::Invalid(format!("cube map `{name}`: {e}")))
    }

    pub fn double<R: ExactRing>(&self, ring: &R, name: &str) -> Result<DoubleComplex<R>> {
        let Entity::Double { low, entries, diffs } = self.get(name)? else {
            return Err(Error::Invalid(format!("`{name}` is not a double complex")));
        };
        let mut es: BTreeMap<i64, ChainComplex<R>> = BTreeMap::new();
        for (p, s) in entries {
            es.insert(*p, self.complex(ring, &s.text)?);
        }
        let hi = es.keys().next_back().copied().unwrap_or(*low - 1).max(*low - 1);
        if es.keys().any(|p| p < low) {
            return Err(Error::Invalid(format!("double `{name}` has an entry below its low degree")));
        }
        let entry = |p: i64| es.get(&p).cloned().unwrap_or_else(|| ChainComplex::zero(ring));
        let mut ds: BTreeMap<i64, ChainMap<R>> = BTreeMap::new();
        for (p, s) in diffs {
            let f = self.chain_map(ring, &s.text)?;
            if f.dom != entry(*p) || f.cod != entry(p - 1) {
                return Err(Error::parse(s.line, s.column, format!("`{}` does not map entry {p} to entry {}", s.text, p - 1)));
            }
            ds.insert(*p, f);
        }
        let ents: Vec<ChainComplex<R>> = (*low..=hi).map(entry).collect();
        let maps = (*low + 1..=hi)
            .map(|p| ds.get(&p).cloned().unwrap_or_else(|| ChainMap::zero(&entry(p), &entry(p - 1))))
            .collect();
        if ents.is_empty() {
            return Ok(DoubleComplex::zero(ring));
        }
        DoubleComplex::new(ring, *low, ents, maps).map_err(|e| Error::Invalid(format!("double `{name}`: {e}")))
    }

    pub fn suite(&self, name: &str) -> Result<SuiteConfig> {
        match self.get(name)? {
            Entity::Suite(c) => Ok(c.clone()),
            e => Err(Error::Invalid(format!("`{name}` is a {}, not a suite", e.kind()))),
        }
    }

    /// Add an entity under a fresh name.
    pub fn push(&mut self, name: &str, e: Entity) -> Result<()> {
        if self.get(name).is_ok() {
            return Err(Error::Invalid(format!("duplicate name `{name}`")));
        }
        self.entities.push((name.to_string(), e));
        Ok(())
    }
}

/// The entity describing a cube, with every vertex and every nonzero edge.
pub fn cube_entity<R: ExactRing>(x: &Cube<R>, dirs: &[String]) -> Entity {
    let d = x.dirs();
    let vertices = d
        .subsets()
        .map(|t| {
            let m = x.vertex(t);
            VertexSpec {
                subset: d.labels_of(t),
                rank: m.ngens(),
                relations: (m.relations().cols() > 0).then(|| Spanned::new(&m.relations().to_text(), 0, 0)),
                grading: m.grading().map(|g| g.to_vec()),
            }
        })
        .collect();
    let mut edges = Vec::new();
    for t in d.subsets() {
        for k in crate::cubes::members(t) {
            let b = x.boundary(t, k);
            if !b.is_zero() {
                edges.push((d.labels_of(t), dirs[k].clone(), Spanned::new(&b.to_text(), 0, 0)));
            }
        }
    }
    Entity::Cube {
        dirs: dirs.to_vec(),
        vertices,
        edges,
    }
}

/// Parse, resolve and validate; the result is in canonical form.
pub fn parse_document(src: &str) -> Result<Document> {
    let mut d = parse_syntax(src)?;
    d.canonicalize()?;
    Ok(d)
}

pub fn read_document(path: &std::path::Path) -> Result<Document> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&src)
}
