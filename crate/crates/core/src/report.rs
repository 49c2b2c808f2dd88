//! Machine-readable results of the verification suites.

use std::fmt::{self, Display};

use serde::{Deserialize, Serialize};

/// Bumped whenever the JSON layout of [`SuiteReport`] changes.
pub const SCHEMA_VERSION: u32 = 1;

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
    pub expected: String,
    pub actual: String,
    /// Short label of the result the check reproduces.
    pub paper_anchor: String,
}

impl Check {
    /// Status is `Pass` exactly when the serialized values agree.
    pub fn new(name: impl Into<String>, expected: impl Display, actual: impl Display, anchor: &str) -> Self {
        let expected = expected.to_string();
        let actual = actual.to_string();
        let status = if expected == actual { Status::Pass } else { Status::Fail };
        Check {
            name: name.into(),
            status,
            expected,
            actual,
            paper_anchor: anchor.to_string(),
        }
    }

    /// A check whose computation itself failed.
    pub fn error(name: impl Into<String>, expected: impl Display, err: impl Display, anchor: &str) -> Self {
        Check {
            name: name.into(),
            status: Status::Fail,
            expected: expected.to_string(),
            actual: format!("error: {err}"),
            paper_anchor: anchor.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    /// Checks are sorted by name so the report does not depend on evaluation order.
    pub fn new(suite: &str, seed: u64, mut checks: Vec<Check>, elapsed_ms: u64) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        SuiteReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            seed,
            checks,
            elapsed_ms,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// JSON with `elapsed_ms` zeroed, for reproducibility comparisons.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.elapsed_ms = 0;
        serde_json::to_string(&c).expect("report serializes")
    }
}

impl Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {}, {} ms)", self.suite, self.seed, self.elapsed_ms)?;
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            write!(f, "  {tag}  {:w$}  {}", c.name, c.actual)?;
            if !c.passed() {
                write!(f, "  (expected {})", c.expected)?;
            }
            writeln!(f, "  [{}]", c.paper_anchor)?;
        }
        let n = self.checks.len();
        let ok = self.checks.iter().filter(|c| c.passed()).count();
        write!(f, "  {ok}/{n} checks passed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_from_strings() {
        assert!(Check::new("a", 5, "5", "x").passed());
        assert!(!Check::new("a", 5, 6, "x").passed());
        let r = SuiteReport::new("s", 1, vec![Check::new("b", 1, 1, ""), Check::new("a", 1, 1, "")], 3);
        assert_eq!(r.checks[0].name, "a");
        assert!(r.passed());
        assert!(!r.canonical_json().contains("\"elapsed_ms\":3"));
    }
}
