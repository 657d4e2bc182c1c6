//! Verdicts, reports and the crate error type.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::hash::{DefaultHasher, Hash, Hasher};

pub const DEFAULT_DEPTH: usize = 64;
pub const DEFAULT_SAMPLE: usize = 24;

/// Sampling bounds for presented (infinite) carriers.
///
/// `sample` points are quantified over; witnesses are searched for among the
/// first `depth` elements and along the first `depth` terms of every chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub depth: usize,
    pub sample: usize,
}

impl Default for Bound {
    fn default() -> Self {
        Bound { depth: DEFAULT_DEPTH, sample: DEFAULT_SAMPLE }
    }
}

impl Bound {
    pub fn depth(depth: usize) -> Bound {
        Bound { depth, sample: DEFAULT_SAMPLE.min(depth) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { counterexample: Value },
    /// Held on every tested instance up to the bound.
    VerifiedUpToBound { bound: usize },
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn fail(cx: Value) -> Verdict {
        Verdict::Fail { counterexample: cx }
    }

    /// Pass when exact, bounded pass otherwise.
    pub fn held(exact: bool, bound: usize) -> Verdict {
        if exact {
            Verdict::Pass
        } else {
            Verdict::VerifiedUpToBound { bound }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Verdict::Pass => "pass".into(),
            Verdict::Fail { .. } => "fail".into(),
            Verdict::VerifiedUpToBound { bound } => format!("verified up to bound {bound}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub subject: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Report {
        Report {
            schema: 1,
            subject: subject.into(),
            checks: Vec::new(),
            result: None,
            digest: String::new(),
            elapsed_ms: None,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, verdict: Verdict) -> &mut Self {
        self.checks.push(Check { name: name.into(), verdict, detail: None });
        self
    }

    pub fn push_detail(&mut self, name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), verdict, detail: Some(detail.into()) });
    }

    /// Pass/fail check from a boolean with a counterexample supplier.
    pub fn expect(&mut self, name: impl Into<String>, ok: bool, exact: bool, bound: usize, cx: impl FnOnce() -> Value) {
        let v = if ok { Verdict::held(exact, bound) } else { Verdict::fail(cx()) };
        self.push(name, v);
    }

    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|c| c.verdict.is_fail())
    }

    pub fn first_fail(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.verdict.is_fail())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn with_digest(mut self, input: &str) -> Report {
        self.digest = digest(input);
        self
    }

    pub fn with_result(mut self, v: Value) -> Report {
        self.result = Some(v);
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.subject);
        for c in &self.checks {
            s.push_str(&format!("  {:<48} {}", c.name, c.verdict.label()));
            if let Verdict::Fail { counterexample } = &c.verdict {
                s.push_str(&format!("  counterexample: {counterexample}"));
            }
            if let Some(d) = &c.detail {
                s.push_str(&format!("  ({d})"));
            }
            s.push('\n');
        }
        if let Some(r) = &self.result {
            s.push_str(&format!("  result: {r}\n"));
        }
        s
    }
}

pub fn digest(input: &str) -> String {
    let mut h = DefaultHasher::new();
    input.hash(&mut h);
    format!("{:016x}", h.finish())
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {node}: {msg}")]
    Parse { node: String, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub fn parse(node: impl Into<String>, msg: impl Into<String>) -> Error {
        Error::Parse { node: node.into(), msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn report_serialization_roundtrips() {
        let mut r = Report::new("x");
        r.push("a", Verdict::Pass);
        r.push("b", Verdict::VerifiedUpToBound { bound: 64 });
        r.push_detail("c", Verdict::fail(json!({"x": 1})), "note");
        let s = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert!(!r.passed());
        assert_eq!(r.first_fail().unwrap().name, "c");
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest("abc"), digest("abc"));
        assert_ne!(digest("abc"), digest("abd"));
    }
}
