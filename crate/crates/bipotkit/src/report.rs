//! JSON report types. `+inf` is written as the string `"inf"`.

use bipotkit_core::ExtReal;
use serde::{Serialize, Serializer};

/// Extended real serialised as a JSON number or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub ExtReal);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            ExtReal::Finite(v) => s.serialize_f64(v),
            ExtReal::PosInf => s.serialize_str("inf"),
        }
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num(ExtReal::from(v))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    pub failures: usize,
    /// Largest residual seen (error, excess or violation, per check).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: &str, samples: usize, failures: usize) -> Self {
        Check {
            name: name.to_owned(),
            passed: failures == 0,
            samples,
            failures,
            worst: None,
            tolerance: None,
            note: None,
        }
    }

    pub fn worst(mut self, w: impl Into<Num>) -> Self {
        self.worst = Some(w.into());
        self
    }

    pub fn tolerance(mut self, t: f64) -> Self {
        self.tolerance = Some(t);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }
}

/// Top-level `verify` report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub law: String,
    pub suite: String,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub passed: bool,
}

impl Report {
    pub fn new(law: &str, suite: &str, seed: u64, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Report { law: law.to_owned(), suite: suite.to_owned(), checks, seed, passed }
    }
}

/// Output of `eval`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub law: String,
    pub b: Num,
    pub duality: f64,
    pub gap: Num,
    pub critical: bool,
    pub regime: String,
}
