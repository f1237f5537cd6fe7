//! Verification reports shared by every check.

use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// One checked relation.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
    pub status: Status,
    pub max_deviation: f64,
}

impl Check {
    /// An exact check: deviation 0 on success, 1 on failure unless given.
    pub fn exact(relation: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>, ok: bool) -> Self {
        Check {
            relation: relation.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            status: Status::from_bool(ok),
            max_deviation: if ok { 0.0 } else { 1.0 },
        }
    }

    pub fn numeric(
        relation: impl Into<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        deviation: f64,
        tolerance: f64,
    ) -> Self {
        Check {
            relation: relation.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            status: Status::from_bool(deviation <= tolerance),
            max_deviation: deviation,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A named suite of checks plus the parameters that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub params: Map<String, Value>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), params: Map::new(), checks: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn count(&self) -> usize {
        self.checks.len()
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures().count();
        writeln!(f, "{}: {} checks, {} failed", self.suite, self.count(), failed)?;
        for c in self.failures() {
            writeln!(f, "  FAIL {}: {} vs {} (deviation {:e})", c.relation, c.lhs, c.rhs, c.max_deviation)?;
        }
        Ok(())
    }
}
