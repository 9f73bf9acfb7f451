//! JSON report shared by the verification suites and the command line.
use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub dims: Vec<usize>,
    /// Number of nonzero residual entries.
    pub residual_norm: usize,
    pub wall_time_ms: u64,
    /// False for sound partial checks at dimensions below the conclusive one.
    pub conclusive: bool,
    pub note: String,
}

/// What a check computes, before timing is attached.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub dims: Vec<usize>,
    pub residual_norm: usize,
    pub conclusive: bool,
    pub note: String,
}

impl Outcome {
    pub fn new(pass: bool) -> Self {
        Outcome { pass, conclusive: true, ..Default::default() }
    }

    pub fn dims(mut self, dims: Vec<usize>) -> Self {
        self.dims = dims;
        self
    }

    pub fn residual(mut self, r: usize) -> Self {
        self.residual_norm = r;
        self
    }

    pub fn partial(mut self) -> Self {
        self.conclusive = false;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

impl Check {
    /// Runs `f`, timing it; an error becomes a failed check carrying the
    /// error message.
    pub fn run(name: impl Into<String>, f: impl FnOnce() -> Result<Outcome>) -> Check {
        let start = Instant::now();
        let out = f().unwrap_or_else(|e| Outcome::new(false).note(format!("error: {e}")));
        Check {
            name: name.into(),
            status: if out.pass { Status::Pass } else { Status::Fail },
            dims: out.dims,
            residual_norm: out.residual_norm,
            wall_time_ms: start.elapsed().as_millis() as u64,
            conclusive: out.conclusive,
            note: out.note,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub params: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    pub homology_tables: BTreeMap<String, Vec<usize>>,
}

impl Report {
    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("serializable parameter"));
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.homology_tables.extend(other.homology_tables);
        for (k, v) in other.params {
            self.params.entry(k).or_insert(v);
        }
    }

    /// Logical AND of all check statuses.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// The report with timings zeroed; equal across runs with equal inputs.
    pub fn canonical(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_time_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Report> {
        serde_json::from_str(s).map_err(|e| crate::Error::Format(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_become_failures() {
        let c = Check::run("x", || Err(crate::Error::Singular));
        assert_eq!(c.status, Status::Fail);
        assert!(c.note.contains("singular"));
    }

    #[test]
    fn json_roundtrip() {
        let mut r = Report::default();
        r.param("p", 2);
        r.checks.push(Check::run("a", || Ok(Outcome::new(true).dims(vec![1, 2]).partial())));
        r.homology_tables.insert("t".into(), vec![1, 0, 1]);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(back.passed());
        assert!(r.to_json().contains("\"status\": \"pass\""));
    }
}
