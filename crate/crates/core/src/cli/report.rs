//! Pass/fail records of the check suites.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// measured <= tolerance
    #[serde(rename = "<=")]
    AtMost,
    /// measured > tolerance
    #[serde(rename = ">")]
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    /// what property is being checked
    pub anchor: &'static str,
    pub measured: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub assertions: Vec<Assertion>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub seed: u64,
    pub k: f64,
    pub multiplier: crate::fuchsian::MultiplierKind,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Collects assertions, applying tolerance overrides by assertion name.
pub(crate) struct Recorder<'a> {
    overrides: &'a BTreeMap<String, f64>,
    out: Vec<Assertion>,
}

impl<'a> Recorder<'a> {
    pub fn new(overrides: &'a BTreeMap<String, f64>) -> Self {
        Self {
            overrides,
            out: Vec::new(),
        }
    }

    fn push(&mut self, name: String, anchor: &'static str, measured: Result<f64>, tol: f64, rel: Relation) {
        let tolerance = self.overrides.get(&name).copied().unwrap_or(tol);
        let (measured, context) = match measured {
            Ok(v) => (v, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        let passed = match rel {
            Relation::AtMost => measured <= tolerance,
            Relation::Above => measured > tolerance,
        };
        self.out.push(Assertion {
            name,
            anchor,
            measured,
            relation: rel,
            tolerance,
            passed,
            context,
        });
    }

    /// measured <= tolerance; an error fails the assertion and is kept as context.
    pub fn at_most(&mut self, name: impl Into<String>, anchor: &'static str, measured: Result<f64>, tol: f64) {
        self.push(name.into(), anchor, measured, tol, Relation::AtMost);
    }

    pub fn above(&mut self, name: impl Into<String>, anchor: &'static str, measured: Result<f64>, bound: f64) {
        self.push(name.into(), anchor, measured, bound, Relation::Above);
    }

    /// Attaches context to the most recent assertion.
    pub fn note(&mut self, context: impl Into<String>) {
        if let Some(last) = self.out.last_mut() {
            let c = context.into();
            last.context = Some(match last.context.take() {
                Some(prev) => format!("{prev}; {c}"),
                None => c,
            });
        }
    }

    pub fn finish(self, suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            passed: self.out.iter().all(|a| a.passed),
            assertions: self.out,
        }
    }
}
