use std::time::Instant;

use super::document::{read_document, Document};
use super::report::{digest, Outcome, Report, Timing};
use super::ring::{dispatch, dispatch_poly, AnyRing};
use super::suite::{run_suite, suite_config};
use super::wire::{certificate_from_wire, certificate_to_wire, WireCertificate};
use super::Cli;
use crate::arith::{groebner_basis, smith_normal_form, ExactRing, Field, Ideal, PolyRing, Ring, RingDescriptor};
use crate::complexes::{homology, is_quasi_iso, with_mutation, ChainComplex, Mutation};
use crate::cubes::{is_admissible, is_monic, totalize, verify_totisom, Cube};
use crate::error::{Error, Result};
use crate::fpmodules::PresentedModule;
use crate::koszul::{
    is_in_mm, is_koszul_cube, is_total_quasi_iso, quasi_split_witness, wgp_check, MMParams, RegularSequence, Verdict,
    DEFAULT_BOUND,
};
use crate::witness::{endpoint_is_tot, zigzag_to_tot};

pub const COMMANDS: &[&str] = &[
    "check-koszul",
    "check-admissible",
    "tot",
    "homology",
    "tq",
    "zigzag",
    "wgp",
    "quasi-split",
    "gb",
    "snf",
    "suite",
    "verify",
];

struct Ctx<'a> {
    cli: &'a Cli,
    doc: Document,
    bound: u32,
}

impl Ctx<'_> {
    fn pick(&self, kind: &str, name: &Option<String>) -> Result<String> {
        self.doc.pick(kind, name.as_deref())
    }

    fn sequence<F: Field>(&self, ring: &PolyRing<F>) -> Result<RegularSequence<F>> {
        let name = self.pick("sequence", &self.cli.sequence)?;
        let (labels, elems) = self.doc.sequence(ring, &name)?;
        RegularSequence::new(ring, labels, elems)
    }

    fn cube<R: ExactRing>(&self, ring: &R) -> Result<Cube<R>> {
        self.doc.cube(ring, &self.pick("cube", &self.cli.cube)?)
    }

    fn params(&self, dirs: &crate::cubes::DirectionSet) -> MMParams {
        MMParams {
            u: self.cli.u.clone(),
            v: dirs.labels().to_vec(),
            p: self.cli.p.unwrap_or(0),
        }
    }
}

fn verdict(r: &mut Report, name: &str, v: &Verdict) {
    match v {
        Verdict::Holds => r.push(name, Outcome::Pass, ""),
        Verdict::Fails(why) => r.push(name, Outcome::Fail, why.clone()),
        Verdict::Inconclusive(why) => r.push(name, Outcome::Inconclusive, why.clone()),
    }
}

/// `H ≅ A^r ⊕ A/(d_1) ⊕ ...` over Euclidean rings, the presentation otherwise.
pub fn describe_module<R: ExactRing>(m: &PresentedModule<R>) -> String {
    if m.is_zero() {
        return "0".into();
    }
    let ring = m.ring();
    let rel = m.relations();
    if ring.check_euclidean().is_ok() {
        let factors: Vec<R::Elem> = if rel.cols() == 0 {
            vec![]
        } else {
            match smith_normal_form(rel) {
                Ok(s) => s.invariant_factors(),
                Err(_) => return format!("coker {} on {} generators", rel.to_text(), m.ngens()),
            }
        };
        let free = m.ngens() - factors.len();
        let mut parts = Vec::new();
        if free > 0 {
            parts.push(if free == 1 { "A".to_string() } else { format!("A^{free}") });
        }
        for f in factors.iter().filter(|f| ring.unit_inverse(f).is_none()) {
            parts.push(format!("A/({})", ring.format_elem(f)));
        }
        return parts.join(" + ");
    }
    format!("coker {} on {} generators", rel.to_text(), m.ngens())
}

fn complex_lines<R: ExactRing>(r: &mut Report, name: &str, x: &ChainComplex<R>) -> Result<()> {
    let x = x.trimmed();
    if x.is_zero() {
        r.line(format!("{name} = 0"));
        return Ok(());
    }
    for n in x.low()..=x.high() {
        r.line(format!("{name}_{n}: rank {}", x.rank(n)));
        if n > x.low() {
            r.line(format!("  d_{n} = {}", x.d(n).to_text()));
        }
    }
    for n in x.low()..=x.high() {
        r.line(format!("H_{n} = {}", describe_module(&homology(&x, n)?)));
    }
    Ok(())
}

fn check_koszul(c: &Ctx, r: &mut Report) -> Result<()> {
    let ring = c.doc.ring()?;
    dispatch_poly!(&ring, "check-koszul", ring => {
        let fs = c.sequence(ring)?;
        let x = c.cube(ring)?;
        let a = is_koszul_cube(&x, &fs, c.bound)?;
        let b = is_in_mm(&x, &MMParams::koszul(x.dirs()), &fs, c.bound)?;
        verdict(r, "koszul", &a);
        let detail = format!("membership: {b}");
        if a.is_inconclusive() || b.is_inconclusive() {
            r.push("definition-agreement", Outcome::Inconclusive, detail);
        } else {
            r.check("definition-agreement", a.holds() == b.holds(), detail);
        }
        Ok(())
    })
}

fn check_admissible(c: &Ctx, r: &mut Report) -> Result<()> {
    let ring = c.doc.ring()?;
    dispatch!(&ring, ring => {
        let x = c.cube(ring)?;
        r.check("monic", is_monic(&x), "");
        r.check("admissible", is_admissible(&x), "");
        Ok(())
    })
}

fn tot(c: &Ctx, r: &mut Report) -> Result<()> {
    let ring = c.doc.ring()?;
    dispatch!(&ring, ring => {
        let x = c.cube(ring)?;
        complex_lines(r, "Tot", &totalize(&x)?)?;
        if is_admissible(&x) {
            let rep = verify_totisom(&x)?;
            for (p, ok) in &rep.higher_vanish {
                r.check(&format!("H_{p}-vanishes"), *ok, "");
            }
            r.check("H_0-iso", rep.iso, "canonical map onto the iterated 0-th homology");
        } else {
            r.line("the cube is not admissible; the totalization isomorphism is not checked");
        }
        Ok(())
    })
}

fn homology_cmd(c: &Ctx, r: &mut Report) -> Result<()> {
    let ring = c.doc.ring()?;
    dispatch!(&ring, ring => {
        if c.cli.map.is_some() || c.cli.complex.is_none() && c.doc.pick("complex", None).is_err() {
            let name = c.pick("chainmap", &c.cli.map)?;
            let f = c.doc.chain_map(ring, &name)?;
            complex_lines(r, "X", &f.dom)?;
            complex_lines(r, "Y", &f.cod)?;
            r.check("quasi-iso", is_quasi_iso(&f), "");
        } else {
            let x = c.doc.complex(ring, &c.pick("complex", &c.cli.complex)?)?;
            complex_lines(r, "X", &x)?;
        }
        Ok(())
    })
}

fn tq(c: &Ctx, r: &mut Report) -> Result<()> {
    let ring = c.doc.ring()?;
    dispatch_poly!(&ring, "tq", ring => {
        let fs = c.sequence(ring)?;
        let f = c.doc.cube_map(ring, &c.pick("cubemap", &c.cli.cubemap)?)?;
        let params = c.params(f.dom.dirs());
        r.check("total-quasi-iso", is_total_quasi_iso(&f, &params, &fs, c.bound)?, "");
        Ok(())
    })
}

fn zigzag(c: &Ctx, r: &mut Report) -> Result<()> {
    let ring = c.doc.ring()?;
    dispatch!(&ring, ring => {
        let x = c.doc.double(ring, &c.pick("double", &c.cli.double)?)?;
        match zigzag_to_tot(&x) {
            Ok(cert) => {
                r.check("certificate", cert.verify().is_ok(), format!("{cert}"));
                r.check("endpoint", endpoint_is_tot(&cert), format!("shift {}", cert.shift));
                complex_lines(r, "Tot", &crate::witness::tot_outer(&x))?;
                r.certificate = Some(certificate_to_wire(&cert));
            }
            Err(Error::Verification(why)) => r.check("certificate", false, why),
            Err(e) => return Err(e),
        }
        Ok(())
    })
}

fn wgp(c: &Ctx, r: &mut Report) -> Result<()> {
    let ring = c.doc.ring()?;
    dispatch_poly!(&ring, "wgp", ring => {
        let fs = c.sequence(ring)?;
        let w = wgp_check(&c.cube(ring)?, &fs, c.bound)?;
        r.check("chain-map", w.chain_map, "");
        r.check("higher-vanish", w.higher_vanish, "");
        r.check("H_0-iso", w.h0_iso, "");
        r.check("totisom-agreement", w.agrees(), "");
        Ok(())
    })
}

fn quasi_split(c: &Ctx, r: &mut Report) -> Result<()> {
    let ring = c.doc.ring()?;
    dispatch_poly!(&ring, "quasi-split", ring => {
        let fs = c.sequence(ring)?;
        let x = c.cube(ring)?;
        let w = quasi_split_witness(&x, &c.params(x.dirs()), &fs, c.bound)?;
        let off = w.report.offending_vertex.as_ref().map(|v| format!("at {{{}}}", v.join(","))).unwrap_or_default();
        r.check("exact", w.report.exact, off);
        r.check("r-tq-trivial", w.report.r_tq_trivial, "");
        r.check("r-in-mm", w.report.r_in_mm, "");
        r.check("unique-comparisons", w.report.unique_comparisons, "");
        for t in x.dirs().subsets() {
            r.line(format!("{{{}}}: r rank {}, s rank {}", x.dirs().labels_of(t).join(","), w.r.rank(t), w.s.rank(t)));
        }
        Ok(())
    })
}

fn gb(c: &Ctx, r: &mut Report) -> Result<()> {
    let ring = c.doc.ring()?;
    dispatch_poly!(&ring, "gb", ring => {
        let (_, gens) = c.doc.sequence(ring, &c.pick("sequence", &c.cli.sequence)?)?;
        let basis = groebner_basis(ring, &gens);
        for g in &basis {
            r.line(format!("g = {}", ring.format_elem(g)));
        }
        if let Some(p) = &c.cli.poly {
            let f = c.doc.elem(ring, p)?;
            let ideal = Ideal::new(ring, gens.clone());
            r.check("membership", ideal.contains(&f), format!("{p} = {}", ring.format_elem(&f)));
        }
        Ok(())
    })
}

fn snf(c: &Ctx, r: &mut Report) -> Result<()> {
    let ring = c.doc.ring()?;
    dispatch!(&ring, ring => {
        let m = c.doc.matrix(ring, &c.pick("matrix", &c.cli.matrix)?)?;
        let s = smith_normal_form(&m)?;
        r.line(format!("U = {}", s.u.to_text()));
        r.line(format!("D = {}", s.d.to_text()));
        r.line(format!("V = {}", s.v.to_text()));
        let fs = s.invariant_factors();
        let text: Vec<String> = fs.iter().map(|f| ring.format_elem(f)).collect();
        r.line(format!("invariant factors: [{}]", text.join(", ")));
        r.check("U M V = D", s.u.mul(&m).mul(&s.v) == s.d, "");
        let divides = fs.windows(2).all(|w| ring.exact_div(&w[1], &w[0]).is_some());
        r.check("divisibility", divides, "");
        Ok(())
    })
}

fn verify_cert<R: ExactRing>(ring: &R, w: &WireCertificate, r: &mut Report) {
    match certificate_from_wire(ring, w) {
        Ok(cert) => {
            let v = cert.verify();
            let detail = v.as_ref().err().map(|e| e.to_string()).unwrap_or_default();
            r.check("certificate", v.is_ok(), detail);
            r.check("endpoint", endpoint_is_tot(&cert), format!("shift {}", cert.shift));
            r.check("round-trip", certificate_to_wire(&cert) == *w, "");
        }
        Err(e) => r.check("certificate", false, format!("cannot rebuild: {e}")),
    }
}

fn verify(cli: &Cli, r: &mut Report) -> Result<()> {
    let path = cli
        .file
        .as_ref()
        .or(cli.doc.as_ref())
        .ok_or_else(|| Error::Invalid("verify needs a report file".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let rep = Report::from_json(&text)?;
    let w = rep
        .certificate
        .ok_or_else(|| Error::Invalid(format!("{} carries no certificate", path.display())))?;
    let ring = AnyRing::from_descriptor(&RingDescriptor::from_text(&w.ring)?)?;
    r.line(format!("re-verified certificate from a `{}` report", rep.command));
    dispatch!(&ring, ring => verify_cert(ring, &w, r));
    Ok(())
}

fn mutation(cli: &Cli) -> Result<Option<Mutation>> {
    match &cli.mutation {
        None => Ok(None),
        Some(m) => Mutation::from_name(m)
            .map(Some)
            .ok_or_else(|| Error::Invalid(format!("unknown mutation `{m}`"))),
    }
}

fn body(cli: &Cli, preset: Option<Document>, r: &mut Report) -> Result<()> {
    let load = |p: &std::path::PathBuf| read_document(p);
    match cli.command.as_str() {
        "verify" => return verify(cli, r),
        "suite" => {
            let doc = match preset {
                Some(d) => Some(d),
                None => cli.doc.as_ref().map(load).transpose()?,
            };
            let cfg = suite_config(cli, doc.as_ref())?;
            r.inputs_digest = digest(&["suite", &cfg.canonical()]);
            run_suite(&cfg, cli.budget_secs, r);
            return Ok(());
        }
        _ => {}
    }
    let doc = match preset {
        Some(d) => d,
        None => load(
            cli.doc
                .as_ref()
                .ok_or_else(|| Error::Invalid(format!("`{}` needs --doc", cli.command)))?,
        )?,
    };
    r.inputs_digest = digest(&[&cli.command, &doc.to_text(), &cli.canonical_args()]);
    let c = Ctx {
        cli,
        doc,
        bound: cli.bound.unwrap_or(DEFAULT_BOUND),
    };
    match cli.command.as_str() {
        "check-koszul" => check_koszul(&c, r),
        "check-admissible" => check_admissible(&c, r),
        "tot" => tot(&c, r),
        "homology" => homology_cmd(&c, r),
        "tq" => tq(&c, r),
        "zigzag" => zigzag(&c, r),
        "wgp" => wgp(&c, r),
        "quasi-split" => quasi_split(&c, r),
        "gb" => gb(&c, r),
        "snf" => snf(&c, r),
        _ => unreachable!("commands are checked before dispatch"),
    }
}

/// Run one command; every failure ends up in the report.
pub fn run(cli: &Cli) -> Report {
    run_with(cli, None)
}

/// Like [`run`], with an already parsed document in place of `--doc`.
pub fn run_with(cli: &Cli, doc: Option<Document>) -> Report {
    let start = Instant::now();
    let mut r = Report::new(&cli.command, digest(&[&cli.command, &cli.canonical_args()]));
    r.seed = cli.seed;
    let res = if !COMMANDS.contains(&cli.command.as_str()) {
        Err(Error::Invalid(format!(
            "unknown command `{}`; expected one of {}",
            cli.command,
            COMMANDS.join(", ")
        )))
    } else {
        match mutation(cli) {
            Ok(m) => with_mutation(m, || body(cli, doc, &mut r)),
            Err(e) => Err(e),
        }
    };
    if let Err(e) = res {
        r.error = Some(e.to_string());
    }
    if cli.timings {
        r.timings = Some(vec![Timing {
            phase: "total".into(),
            seconds: start.elapsed().as_secs_f64(),
        }]);
    }
    r.finish()
}
