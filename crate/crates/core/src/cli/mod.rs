//! Command-line front end: documents, commands, suites and reports.
//!
//! Exit codes: 0 pass, 1 fail, 2 usage or input error, 3 inconclusive.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

mod commands;
pub mod document;
pub mod report;
pub(crate) mod ring;
pub mod suite;
pub mod wire;

pub use commands::{run, run_with, COMMANDS};
pub use document::{parse_document, read_document, Document, Entity, SuiteConfig};
pub use report::{Check, Outcome, Report, Tally};
pub use ring::AnyRing;
pub use suite::run_suite;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Clone, Debug, Default, Parser)]
#[command(name = "koszulkit", version, about = "Exact homological algebra on Koszul cubes and double complexes")]
pub struct Cli {
    /// One of check-koszul, check-admissible, tot, homology, tq, zigzag,
    /// wgp, quasi-split, gb, snf, suite, verify.
    pub command: String,
    /// Report to re-check (verify only).
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub doc: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub count: Option<usize>,
    /// Largest power tried when looking for an annihilating power.
    #[arg(long)]
    pub bound: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub cube: Option<String>,
    #[arg(long)]
    pub cubemap: Option<String>,
    #[arg(long)]
    pub sequence: Option<String>,
    #[arg(long)]
    pub complex: Option<String>,
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long)]
    pub matrix: Option<String>,
    #[arg(long)]
    pub double: Option<String>,
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long = "suite-name")]
    pub suite: Option<String>,
    /// Labels of U, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub u: Vec<String>,
    #[arg(long)]
    pub p: Option<usize>,
    /// Fault injection for negative controls: cone-sign-flip, mislabel-qis.
    #[arg(long)]
    pub mutation: Option<String>,
    /// Record wall-clock timings; reports are then not reproducible.
    #[arg(long)]
    pub timings: bool,
    #[arg(long = "budget-secs")]
    pub budget_secs: Option<u64>,
}

impl Cli {
    /// The arguments that influence the result, in a fixed order.
    pub fn canonical_args(&self) -> String {
        let mut v = Vec::new();
        let mut put = |k: &str, x: Option<String>| {
            if let Some(x) = x {
                v.push(format!("{k}={x}"));
            }
        };
        put("seed", self.seed.map(|s| s.to_string()));
        put("count", self.count.map(|s| s.to_string()));
        put("bound", self.bound.map(|s| s.to_string()));
        put("cube", self.cube.clone());
        put("cubemap", self.cubemap.clone());
        put("sequence", self.sequence.clone());
        put("complex", self.complex.clone());
        put("map", self.map.clone());
        put("matrix", self.matrix.clone());
        put("double", self.double.clone());
        put("poly", self.poly.clone());
        put("suite", self.suite.clone());
        put("u", (!self.u.is_empty()).then(|| self.u.join(",")));
        put("p", self.p.map(|s| s.to_string()));
        put("mutation", self.mutation.clone());
        v.join(" ")
    }
}

/// Render a report in the requested format.
pub fn render(r: &Report, f: Format) -> String {
    match f {
        Format::Text => r.to_text(),
        Format::Structured => r.to_json(),
    }
}

#[cfg(test)]
mod tests;
