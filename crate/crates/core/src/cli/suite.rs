//! The randomized property suite behind the `suite` command.
//!
//! Sample `i` draws everything from a stream of its own, so the report does
//! not depend on scheduling; records are sorted by index before emission.

use std::time::{Duration, Instant};

use rand::{Rng, RngCore};
use rayon::prelude::*;

use super::document::{Document, SuiteConfig};
use super::report::{Outcome, Report, Tally};
use super::Cli;
use crate::arith::{smith_normal_form, Ideal, Integers, Matrix, Ring};
use crate::complexes::{cone, euler_characteristic, retraction_splitting, with_mutation, Mutation};
use crate::cubes::verify_totisom;
use crate::error::{Error, Result};
use crate::koszul::{
    is_in_mm, is_koszul_cube, quasi_split_witness, random_koszul_cube, random_mm_cube, random_regular_sequence,
    suite_ring, KoszulParams, MMParams, DEFAULT_BOUND,
};
use crate::random::{random_chain_map, random_complex, random_retraction, rng, Sample};
use crate::witness::{
    cone_compare, endpoint_is_tot, random_double_complex, random_outer_morphism, tot_homology_mismatches,
    zigzag_to_tot, DoubleParams,
};

pub const PROPERTIES: &[&str] = &[
    "totisom",
    "definition",
    "euler-cube",
    "euler-cone",
    "zigzag",
    "cone-compare",
    "quasi-split",
    "retraction",
    "snf",
    "gb",
];

impl SuiteConfig {
    pub fn canonical(&self) -> String {
        format!(
            "seed {} count {} bound {} mutation {}",
            self.seed,
            self.count,
            self.bound.unwrap_or(DEFAULT_BOUND),
            self.mutation.as_deref().unwrap_or("none")
        )
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            count: 10,
            bound: None,
            mutation: None,
        }
    }
}

/// The document's suite entry, if any, overridden by flags.
pub fn suite_config(cli: &Cli, doc: Option<&Document>) -> Result<SuiteConfig> {
    let mut cfg = match doc {
        Some(d) => d.suite(&d.pick("suite", cli.suite.as_deref())?)?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(c) = cli.count {
        cfg.count = c;
    }
    if cli.bound.is_some() {
        cfg.bound = cli.bound;
    }
    if cli.mutation.is_some() {
        cfg.mutation = cli.mutation.clone();
    }
    if let Some(m) = &cfg.mutation {
        Mutation::from_name(m).ok_or_else(|| Error::Invalid(format!("unknown mutation `{m}`")))?;
    }
    Ok(cfg)
}

/// Seed of sample `i`: the first word of stream `i` of the suite seed.
pub fn sample_seed(seed: u64, i: usize) -> u64 {
    let mut g = rng(seed);
    g.set_stream(i as u64);
    g.next_u64()
}

type Record = Vec<(&'static str, Outcome, String)>;

fn judge(ok: bool, why: &str) -> (Outcome, String) {
    if ok {
        (Outcome::Pass, String::new())
    } else {
        (Outcome::Fail, why.into())
    }
}

fn prop(rec: &mut Record, name: &'static str, f: impl FnOnce() -> Result<(Outcome, String)>) {
    let (o, d) = match f() {
        Ok(x) => x,
        Err(Error::Inconclusive(why)) => (Outcome::Inconclusive, why),
        Err(e) => (Outcome::Fail, e.to_string()),
    };
    rec.push((name, o, d));
}

/// Every property on objects drawn from `seed`.
pub fn sample(seed: u64, bound: u32) -> Record {
    let mut g = rng(seed);
    let seeds: Vec<u64> = (0..PROPERTIES.len()).map(|_| g.gen()).collect();
    let mut rec = Record::new();
    let z = Integers;

    let koszul = || -> Result<_> {
        let mut g = rng(seeds[0]);
        let n = g.gen_range(1..=3);
        let r = suite_ring(g.gen_range(n..=3));
        let fs = random_regular_sequence(&r, &mut g, n)?;
        let x = random_koszul_cube(&fs, KoszulParams::default(), g.gen())?;
        Ok((fs, x))
    };
    let kc = koszul();
    prop(&mut rec, "totisom", || {
        let (_, x) = kc.clone()?;
        Ok(judge(verify_totisom(&x)?.passed(), "totalization isomorphism fails"))
    });
    prop(&mut rec, "definition", || {
        let (fs, x) = kc.clone()?;
        let a = is_koszul_cube(&x, &fs, bound)?;
        let b = is_in_mm(&x, &MMParams::koszul(x.dirs()), &fs, bound)?;
        if a.is_inconclusive() || b.is_inconclusive() {
            return Ok((Outcome::Inconclusive, format!("{a}; {b}")));
        }
        Ok(judge(a.holds() && a == b, &format!("{a}; {b}")))
    });
    prop(&mut rec, "euler-cube", || {
        let (_, x) = kc.clone()?;
        Ok(judge(x.euler_characteristic() == 0, "nonzero alternating rank sum"))
    });
    prop(&mut rec, "euler-cone", || {
        let mut g = rng(seeds[3]);
        let x = random_complex(&z, &mut g, -1, 3, 3, 1);
        let y = random_complex(&z, &mut g, 0, 2, 3, 1);
        let f = random_chain_map(&x, &y, &mut g, 1);
        let c = cone(&f)?;
        Ok(judge(
            euler_characteristic(&c) == euler_characteristic(&y) - euler_characteristic(&x),
            "Euler characteristics do not subtract",
        ))
    });
    prop(&mut rec, "zigzag", || {
        let x = random_double_complex(&z, &mut rng(seeds[4]), &DoubleParams::default(), false);
        let c = zigzag_to_tot(&x)?;
        c.verify()?;
        Ok(judge(endpoint_is_tot(&c), "endpoint is not the shifted totalization"))
    });
    prop(&mut rec, "cone-compare", || {
        let f = random_outer_morphism(&z, &mut rng(seeds[5]), &DoubleParams::default(), false)?;
        let c = cone_compare(&f)?;
        c.verify()?;
        let bad = tot_homology_mismatches(&c)?;
        Ok(judge(bad.is_empty(), &format!("homology differs in degrees {bad:?}")))
    });
    prop(&mut rec, "quasi-split", || {
        let mut g = rng(seeds[6]);
        let r = suite_ring(3);
        let fs = random_regular_sequence(&r, &mut g, 3)?;
        let mask: u32 = g.gen_range(0..8);
        let (u, v): (Vec<String>, Vec<String>) = {
            let (a, b): (Vec<_>, Vec<_>) = fs.labels().iter().enumerate().partition(|(i, _)| mask >> i & 1 == 1);
            (a.into_iter().map(|t| t.1.clone()).collect(), b.into_iter().map(|t| t.1.clone()).collect())
        };
        let params = KoszulParams {
            max_rank: 2,
            max_exponent: 2,
        };
        let (x, mm) = random_mm_cube(&fs, &u, &v, params, g.gen())?;
        let w = quasi_split_witness(&x, &mm, &fs, bound)?;
        Ok(judge(w.report.passed(), &format!("{:?}", w.report)))
    });
    prop(&mut rec, "retraction", || {
        let (i, p) = random_retraction(&z, &mut rng(seeds[7]), 2, 2, 1);
        Ok(judge(retraction_splitting(&i, &p)?.verify(), "splitting does not verify"))
    });
    prop(&mut rec, "snf", || {
        let mut g = rng(seeds[8]);
        let (rows, cols) = (g.gen_range(1..=4), g.gen_range(1..=4));
        let data = (0..rows * cols).map(|_| z.from_i64(g.gen_range(-9..=9))).collect();
        let m = Matrix::from_vec(&z, rows, cols, data);
        let s = smith_normal_form(&m)?;
        let fs = s.invariant_factors();
        let ok = s.u.mul(&m).mul(&s.v) == s.d && fs.windows(2).all(|w| z.exact_div(&w[1], &w[0]).is_some());
        Ok(judge(ok, "not a Smith form"))
    });
    prop(&mut rec, "gb", || {
        let mut g = rng(seeds[9]);
        let r = suite_ring(g.gen_range(1..=3));
        let gens: Vec<_> = (0..g.gen_range(1..=3)).map(|_| r.sample(&mut g, 2)).collect();
        let mut f = r.zero();
        for h in &gens {
            f = r.add(&f, &r.mul(&r.sample(&mut g, 2), h));
        }
        Ok(judge(Ideal::new(&r, gens).contains(&f), "a combination of the generators is not a member"))
    });
    rec
}

fn pool() -> rayon::ThreadPool {
    let n = std::env::var("KOSZULKIT_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0);
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = n {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

/// Run `cfg.count` samples, stopping early once `budget_secs` have passed.
pub fn run_suite(cfg: &SuiteConfig, budget_secs: Option<u64>, r: &mut Report) {
    let bound = cfg.bound.unwrap_or(DEFAULT_BOUND);
    let mutation = cfg.mutation.as_deref().and_then(Mutation::from_name);
    let start = Instant::now();
    let budget = budget_secs.map(Duration::from_secs);
    let mut records: Vec<(usize, Option<Record>)> = pool().install(|| {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| {
                if budget.is_some_and(|b| start.elapsed() > b) {
                    return (i, None);
                }
                let s = sample_seed(cfg.seed, i);
                (i, Some(with_mutation(mutation, || sample(s, bound))))
            })
            .collect()
    });
    records.sort_by_key(|t| t.0);
    r.seed = Some(cfg.seed);
    r.line(format!("suite: {}", cfg.canonical()));
    let mut tallies: Vec<Tally> = PROPERTIES
        .iter()
        .map(|p| Tally {
            property: p.to_string(),
            ..Default::default()
        })
        .collect();
    let mut first_bad: Vec<Option<String>> = vec![None; PROPERTIES.len()];
    let mut skipped = 0;
    for (i, rec) in &records {
        let Some(rec) = rec else {
            skipped += 1;
            continue;
        };
        let mut bad = Vec::new();
        for (name, o, d) in rec {
            let k = PROPERTIES.iter().position(|p| p == name).expect("known property");
            match o {
                Outcome::Pass => tallies[k].pass += 1,
                Outcome::Inconclusive => tallies[k].inconclusive += 1,
                _ => tallies[k].fail += 1,
            }
            if *o != Outcome::Pass {
                bad.push(format!("{name} {} ({d})", o.name()));
                first_bad[k].get_or_insert_with(|| format!("sample {i}: {d}"));
            }
        }
        let s = sample_seed(cfg.seed, *i);
        if bad.is_empty() {
            r.line(format!("sample {i} seed {s}: pass"));
        } else {
            r.line(format!("sample {i} seed {s}: {}", bad.join("; ")));
        }
    }
    for (k, t) in tallies.iter().enumerate() {
        let o = if t.fail > 0 {
            Outcome::Fail
        } else if t.inconclusive > 0 {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        };
        r.push(t.property.as_str(), o, first_bad[k].clone().unwrap_or_default());
    }
    if skipped > 0 {
        r.push(
            "budget",
            Outcome::Inconclusive,
            format!("time budget exceeded; {} of {} samples ran", cfg.count - skipped, cfg.count),
        );
    }
    r.tallies = tallies;
}
