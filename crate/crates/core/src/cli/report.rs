//! Run reports and their two renderings.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::wire::WireCertificate;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
    Error,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
            Outcome::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Error => 2,
            Outcome::Inconclusive => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub property: String,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub command: String,
    pub inputs_digest: String,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tallies: Vec<Tally>,
    #[serde(default)]
    pub output: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<WireCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub const FORMAT: &str = "koszulkit-report/1";

/// Hex SHA-256 of the canonical inputs.
pub fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    format!("{:x}", h.finalize())
}

impl Report {
    pub fn new(command: &str, inputs_digest: String) -> Self {
        Report {
            format: FORMAT.into(),
            command: command.into(),
            inputs_digest,
            outcome: Outcome::Pass,
            seed: None,
            checks: vec![],
            tallies: vec![],
            output: vec![],
            certificate: None,
            timings: None,
            error: None,
        }
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        let outcome = if ok { Outcome::Pass } else { Outcome::Fail };
        self.push(name, outcome, detail);
    }

    pub fn push(&mut self, name: &str, outcome: Outcome, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            outcome,
            detail: detail.into(),
        });
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.output.push(s.into());
    }

    /// Fail if any check failed, else inconclusive if any was, else pass.
    pub fn finish(mut self) -> Self {
        if self.error.is_some() {
            self.outcome = Outcome::Error;
            return self;
        }
        let has = |o| self.checks.iter().any(|c| c.outcome == o);
        self.outcome = if has(Outcome::Fail) {
            Outcome::Fail
        } else if has(Outcome::Inconclusive) {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        };
        self
    }

    pub fn failed_with(command: &str, inputs_digest: String, e: &Error) -> Self {
        let mut r = Report::new(command, inputs_digest);
        r.error = Some(e.to_string());
        r.finish()
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        serde_json::from_str(s).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\ninputs: {}\n", self.command, self.inputs_digest);
        if let Some(s) = self.seed {
            out += &format!("seed: {s}\n");
        }
        out += &format!("outcome: {}\n", self.outcome.name());
        if let Some(e) = &self.error {
            out += &format!("error: {e}\n");
        }
        for c in &self.checks {
            out += &format!("check {}: {}", c.name, c.outcome.name());
            if !c.detail.is_empty() {
                out += &format!(" ({})", c.detail);
            }
            out += "\n";
        }
        for t in &self.tallies {
            out += &format!(
                "tally {}: {} pass, {} fail, {} inconclusive\n",
                t.property, t.pass, t.fail, t.inconclusive
            );
        }
        for l in &self.output {
            out += l;
            out += "\n";
        }
        if let Some(c) = &self.certificate {
            out += &format!("certificate: {} steps, shift {}\n", c.steps.len(), c.shift);
        }
        if let Some(ts) = &self.timings {
            for t in ts {
                out += &format!("time {}: {:.3}s\n", t.phase, t.seconds);
            }
        }
        out
    }
}
