//! Generators: typical cubes, random Koszul cubes and adversarial
//! non-examples.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{Elem, MMParams, RegularSequence};
use crate::arith::{radical_membership, Field, Ideal, Matrix, MonomialOrder, PolyRing, Rationals, Ring};
use crate::cubes::{members, Cube, Subset};
use crate::error::{Error, Result};
use crate::fpmodules::PresentedModule;
use crate::random::{rng, unimodular, SuiteRng};

/// Size caps for generated cubes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KoszulParams {
    pub max_rank: usize,
    pub max_exponent: u32,
}

impl Default for KoszulParams {
    fn default() -> Self {
        KoszulParams {
            max_rank: 4,
            max_exponent: 3,
        }
    }
}

/// `ℚ[x, y, z]` truncated to `nvars` variables.
pub fn suite_ring(nvars: usize) -> PolyRing<Rationals> {
    let names = ["x", "y", "z", "w"][..nvars.min(4)].iter().map(|s| s.to_string()).collect();
    PolyRing::new(Rationals, names, MonomialOrder::GRevLex).expect("variable names are valid")
}

fn degree<F: Field>(ring: &PolyRing<F>, f: &Elem<F>) -> Option<i64> {
    ring.homogeneous_degree(f)
}

fn free_vertex<F: Field>(ring: &PolyRing<F>, grading: Option<Vec<i64>>, rank: usize) -> PresentedModule<PolyRing<F>> {
    match grading {
        Some(g) => PresentedModule::with_grading(Matrix::zeros(ring, rank, 0), g).expect("grading length"),
        None => PresentedModule::free(ring, rank),
    }
}

/// Summand `i` has exponents `a[i]` and generator degree `shift[i]` at `∅`.
/// Vertex gradings follow from the boundary degrees when the sequence is
/// homogeneous.
fn sum_of_typ<F: Field>(fs: &RegularSequence<F>, a: &[Vec<u32>], shift: &[i64]) -> Result<Cube<PolyRing<F>>> {
    let ring = fs.ring();
    let n = fs.len();
    let degs: Option<Vec<i64>> = fs.elems().iter().map(|f| degree(ring, f)).collect();
    let powers: Vec<Vec<Elem<F>>> = a
        .iter()
        .map(|ai| (0..n).map(|k| ring.pow(&fs.elems()[k], ai[k])).collect())
        .collect();
    let dirs = fs.dirs().clone();
    let vs = dirs
        .subsets()
        .map(|t| {
            let g = degs.as_ref().map(|d| {
                a.iter()
                    .zip(shift)
                    .map(|(ai, s)| s + members(t).iter().map(|&k| ai[k] as i64 * d[k]).sum::<i64>())
                    .collect()
            });
            free_vertex(ring, g, a.len())
        })
        .collect();
    Cube::new(ring, dirs, vs, |_, k| {
        let mut m = Matrix::zeros(ring, a.len(), a.len());
        for (i, p) in powers.iter().enumerate() {
            m.set(i, i, p[k].clone());
        }
        m
    })
}

/// `A` at every vertex and `d^k = f_k^{a_k}`, with exponents in label order.
pub fn typ_cube<F: Field>(fs: &RegularSequence<F>, exponents: &[u32]) -> Result<Cube<PolyRing<F>>> {
    if exponents.len() != fs.len() {
        return Err(Error::Dimension(format!(
            "{} exponents for {} elements",
            exponents.len(),
            fs.len()
        )));
    }
    if exponents.contains(&0) {
        return Err(Error::Invalid("exponents must be positive".into()));
    }
    sum_of_typ(fs, &[exponents.to_vec()], &[0])
}

/// Change basis at every vertex by a graded automorphism.
fn twist<F: Field>(x: &Cube<PolyRing<F>>, rng: &mut SuiteRng) -> Result<Cube<PolyRing<F>>> {
    let ring = x.ring();
    let changes: Vec<_> = x
        .dirs()
        .subsets()
        .map(|t| unimodular(ring, rng, x.rank(t), x.vertex(t).grading()))
        .collect();
    Cube::new(ring, x.dirs().clone(), x.vertices().to_vec(), |t, k| {
        let s = (t & !(1 << k)) as usize;
        changes[s].0.mul(x.boundary(t, k)).mul(&changes[t as usize].1)
    })
}

/// Direct sums of exponent-varied typical cubes, twisted at every vertex.
pub fn random_koszul_cube<F: Field>(
    fs: &RegularSequence<F>,
    params: KoszulParams,
    seed: u64,
) -> Result<Cube<PolyRing<F>>> {
    let mut g = rng(seed);
    let rank = g.gen_range(1..=params.max_rank.max(1));
    let e = params.max_exponent.max(1);
    let a: Vec<Vec<u32>> = (0..rank).map(|_| (0..fs.len()).map(|_| g.gen_range(1..=e)).collect()).collect();
    let shift: Vec<i64> = (0..rank).map(|_| g.gen_range(0..=1)).collect();
    twist(&sum_of_typ(fs, &a, &shift)?, &mut g)
}

/// A cube in `M_A(f_U; f_V)(p)`: a generated Koszul cube on the `V`-part of
/// `fs` with every vertex divided by powers of the `U`-elements, so vertices
/// have projective dimension `#U`. The returned parameters use `p = #U` plus
/// a random slack of 0 or 1.
pub fn random_mm_cube<F: Field>(
    fs: &RegularSequence<F>,
    u: &[String],
    v: &[String],
    params: KoszulParams,
    seed: u64,
) -> Result<(Cube<PolyRing<F>>, MMParams)> {
    let ring = fs.ring();
    let x = if v.is_empty() {
        let rank = rng(seed).gen_range(1..=params.max_rank.max(1));
        let homogeneous = fs.elems().iter().all(|f| degree(ring, f).is_some());
        Cube::point(free_vertex(ring, homogeneous.then(|| vec![0; rank]), rank))
    } else {
        let sub = RegularSequence::new(ring, v.to_vec(), fs.select(v)?)?;
        random_koszul_cube(&sub, params, seed)?
    };
    let mut g = rng(seed ^ 0x00c0_ffee);
    let powers: Vec<Elem<F>> = fs
        .select(u)?
        .iter()
        .map(|f| ring.pow(f, g.gen_range(1..=params.max_exponent.max(1))))
        .collect();
    let vs: Vec<_> = x
        .vertices()
        .iter()
        .map(|m| {
            let n = m.ngens();
            let rel = powers
                .iter()
                .fold(m.relations().clone(), |acc, f| acc.hstack(&Matrix::scalar(ring, n, f.clone())));
            match m.grading() {
                Some(w) => PresentedModule::with_grading(rel, w.to_vec()).expect("grading length"),
                None => PresentedModule::new(rel),
            }
        })
        .collect();
    let y = Cube::new(ring, x.dirs().clone(), vs, |t, k| x.boundary(t, k).clone())?;
    let p = u.len() + g.gen_range(0..=1);
    Ok((
        y,
        MMParams {
            u: u.to_vec(),
            v: v.to_vec(),
            p,
        },
    ))
}

fn random_linear_form<F: Field>(ring: &PolyRing<F>, g: &mut SuiteRng) -> Elem<F> {
    loop {
        let mut f = ring.zero();
        for i in 0..ring.nvars() {
            let c = *[0, 0, 1, 1, -1, 2].choose(g).unwrap();
            f = ring.add(&f, &ring.mul(&ring.from_i64(c), &ring.var(i)));
        }
        if !ring.is_zero(&f) {
            return f;
        }
    }
}

/// `n` homogeneous elements, mostly linear forms with an occasional square,
/// regular in every order. Labels are `f1, …, fn`.
pub fn random_regular_sequence<F: Field>(
    ring: &PolyRing<F>,
    g: &mut SuiteRng,
    n: usize,
) -> Result<RegularSequence<F>> {
    if n == 0 || n > ring.nvars() {
        return Err(Error::Invalid(format!(
            "{n} elements in a ring with {} variables",
            ring.nvars()
        )));
    }
    let labels: Vec<String> = (1..=n).map(|i| format!("f{i}")).collect();
    for _ in 0..64 {
        let fs: Vec<_> = (0..n)
            .map(|_| {
                let l = random_linear_form(ring, g);
                if g.gen_bool(0.2) {
                    ring.pow(&l, 2)
                } else {
                    l
                }
            })
            .collect();
        if let Ok(s) = RegularSequence::new(ring, labels.clone(), fs) {
            return Ok(s);
        }
    }
    let vars = (0..n).map(|i| ring.var(i)).collect();
    RegularSequence::new(ring, labels, vars)
}

/// Non-examples of Koszul cubes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Adversarial {
    /// One direction has zero boundaries.
    NonMonic,
    /// One direction is multiplied by a variable `g` with `f_k` not in `√(g)`.
    WrongSupport,
    /// Every vertex is tensored with `A/(g)`, so vertices are not projective.
    ExcessivePd,
}

impl Adversarial {
    pub const ALL: [Adversarial; 3] = [Adversarial::NonMonic, Adversarial::WrongSupport, Adversarial::ExcessivePd];

    pub fn name(&self) -> &'static str {
        match self {
            Adversarial::NonMonic => "non-monic",
            Adversarial::WrongSupport => "wrong-support",
            Adversarial::ExcessivePd => "excessive-pd",
        }
    }
}

/// A generated Koszul cube damaged according to `kind`. Needs at least two
/// variables for the wrong-support family.
pub fn adversarial_cube<F: Field>(
    fs: &RegularSequence<F>,
    kind: Adversarial,
    params: KoszulParams,
    seed: u64,
) -> Result<Cube<PolyRing<F>>> {
    let x = random_koszul_cube(fs, params, seed)?;
    let ring = fs.ring();
    let mut g = rng(seed ^ 0x5eed_ad7e);
    let k = g.gen_range(0..fs.len());
    let on_k = |t: Subset| t >> k & 1 == 1;
    match kind {
        Adversarial::NonMonic => Cube::new(ring, x.dirs().clone(), x.vertices().to_vec(), |t, l| {
            if l == k {
                Matrix::zeros(ring, x.rank(t & !(1 << l)), x.rank(t))
            } else {
                x.boundary(t, l).clone()
            }
        }),
        Adversarial::WrongSupport => {
            let fk = &fs.elems()[k];
            let mut vars: Vec<usize> = (0..ring.nvars()).collect();
            vars.shuffle(&mut g);
            let mut chosen = None;
            for i in vars {
                let v = ring.var(i);
                if !radical_membership(ring, fk, &Ideal::new(ring, vec![v.clone()]))? {
                    chosen = Some(v);
                    break;
                }
            }
            let v = chosen.ok_or_else(|| Error::Unsupported("no variable avoids the support".into()))?;
            let vs: Vec<_> = x
                .dirs()
                .subsets()
                .map(|t| {
                    let m = x.vertex(t);
                    let gr = m
                        .grading()
                        .map(|w| w.iter().map(|d| d + on_k(t) as i64).collect::<Vec<_>>());
                    free_vertex(ring, gr, m.ngens())
                })
                .collect();
            Cube::new(ring, x.dirs().clone(), vs, |t, l| {
                let b = x.boundary(t, l);
                if l == k {
                    b.mul(&Matrix::scalar(ring, b.cols(), v.clone()))
                } else {
                    b.clone()
                }
            })
        }
        Adversarial::ExcessivePd => {
            let v = ring.var(g.gen_range(0..ring.nvars()));
            let vs: Vec<_> = x
                .vertices()
                .iter()
                .map(|m| {
                    let rel = Matrix::scalar(ring, m.ngens(), v.clone());
                    match m.grading() {
                        Some(w) => PresentedModule::with_grading(rel, w.to_vec()).expect("grading length"),
                        None => PresentedModule::new(rel),
                    }
                })
                .collect();
            Cube::new(ring, x.dirs().clone(), vs, |t, l| x.boundary(t, l).clone())
        }
    }
}
