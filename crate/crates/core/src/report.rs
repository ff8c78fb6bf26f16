//! Verification reports produced by every theorem check.
//!
//! A report is an ordered list of [`Check`]s. Each check records the
//! quantity computed, the bound it is compared against, and a signed margin
//! that is positive exactly when the claimed relation holds. Checks marked
//! non-gating are informational and never fail a report.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    /// Relation identifier, e.g. `"sandwich_lower"`; min-slack is grouped by it.
    pub relation: String,
    pub params: BTreeMap<String, f64>,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub passed: bool,
    pub gating: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// A strict inequality `value > bound` (or `<` when `upper` is set).
    pub fn strict(relation: &str, value: f64, bound: f64, upper: bool) -> Self {
        let margin = if upper { bound - value } else { value - bound };
        Check {
            relation: relation.to_string(),
            params: BTreeMap::new(),
            value,
            bound,
            margin,
            passed: margin > 0.0,
            gating: true,
            note: None,
        }
    }

    /// An equality checked as `discrepancy < tol`. `value` is the discrepancy.
    pub fn within(relation: &str, discrepancy: f64, tol: f64) -> Self {
        Check {
            relation: relation.to_string(),
            params: BTreeMap::new(),
            value: discrepancy,
            bound: tol,
            margin: tol - discrepancy,
            passed: discrepancy < tol,
            gating: true,
            note: None,
        }
    }

    /// A boolean fact (sign pattern, exact equality); margin is +1/-1.
    pub fn holds(relation: &str, ok: bool) -> Self {
        Check {
            relation: relation.to_string(),
            params: BTreeMap::new(),
            value: if ok { 1.0 } else { 0.0 },
            bound: 1.0,
            margin: if ok { 1.0 } else { -1.0 },
            passed: ok,
            gating: true,
            note: None,
        }
    }

    pub fn with(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Overrides the pass flag, e.g. when the margin must also beat an
    /// uncertainty estimate.
    pub fn require(mut self, ok: bool) -> Self {
        self.passed = self.passed && ok;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub passed: bool,
    pub min_slack: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, checks: Vec<Check>) -> Self {
        let mut min_slack: BTreeMap<String, f64> = BTreeMap::new();
        for c in checks.iter().filter(|c| c.gating) {
            let e = min_slack.entry(c.relation.clone()).or_insert(f64::INFINITY);
            if c.margin < *e {
                *e = c.margin;
            }
        }
        let passed = checks.iter().filter(|c| c.gating).all(|c| c.passed);
        VerificationReport {
            name: name.into(),
            passed,
            min_slack,
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.gating && !c.passed)
    }

    pub fn relation(&self, relation: &str) -> impl Iterator<Item = &Check> {
        let relation = relation.to_string();
        self.checks.iter().filter(move |c| c.relation == relation)
    }
}
