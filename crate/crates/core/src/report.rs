//! Structured check results.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

/// One check outcome. A failing report always carries a witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, i64>,
    pub status: Status,
    /// True for negative controls and fault injections, whose correct outcome
    /// is a detected failure.
    pub expect_fail: bool,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, Value>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            expect_fail: false,
            summary: String::new(),
            witness: None,
            metadata: BTreeMap::new(),
            elapsed_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: i64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn summary(mut self, text: impl Into<String>) -> Self {
        self.summary = text.into();
        self
    }

    pub fn expecting_failure(mut self) -> Self {
        self.expect_fail = true;
        self
    }

    pub fn skipped(mut self, why: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.summary = why.into();
        self
    }

    /// Fold a tally into the report: pass iff nothing failed.
    pub fn with_tally(mut self, tally: Tally) -> Self {
        let checked = tally.checked;
        match tally.first_failure {
            None => {
                self.status = Status::Pass;
                if self.summary.is_empty() {
                    self.summary = format!("{checked} identities hold");
                }
            }
            Some((label, witness)) => {
                self.status = Status::Fail;
                self.summary = format!("{} of {checked} failed; first: {label}", tally.failures);
                self.witness = Some(witness);
            }
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Whether the outcome is what the suite expected.
    pub fn as_expected(&self) -> bool {
        match self.status {
            Status::Pass => !self.expect_fail,
            Status::Fail => self.expect_fail,
            Status::Skipped => true,
        }
    }

    pub fn sort_key(&self) -> (String, BTreeMap<String, i64>) {
        (self.check.clone(), self.params.clone())
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{:<7} {}", self.status.to_string(), self.check)?;
        if !params.is_empty() {
            write!(f, "({})", params.join(","))?;
        }
        if self.expect_fail {
            write!(f, " [expected fail]")?;
        }
        if !self.summary.is_empty() {
            write!(f, ": {}", self.summary)?;
        }
        Ok(())
    }
}

/// Accumulates individual identity checks, keeping the first failure.
#[derive(Debug, Default)]
pub struct Tally {
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<(String, Value)>,
}

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, ok: bool, label: impl FnOnce() -> String, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                let label = label();
                let mut w = witness();
                if let Value::Object(map) = &mut w {
                    map.entry("relation").or_insert_with(|| Value::String(label.clone()));
                }
                self.first_failure = Some((label, w));
            }
        }
    }

    /// Record an equality; the witness shows both sides.
    pub fn equal<T: PartialEq + fmt::Display>(&mut self, label: impl FnOnce() -> String, lhs: &T, rhs: &T) {
        let ok = lhs == rhs;
        self.record(ok, label, || serde_json::json!({"lhs": lhs.to_string(), "rhs": rhs.to_string()}));
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }

    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_keeps_first_failure() {
        let mut t = Tally::new();
        t.equal(|| "a".into(), &1, &1);
        t.equal(|| "b".into(), &1, &2);
        t.equal(|| "c".into(), &3, &2);
        let r = VerificationReport::new("x").with_tally(t);
        assert_eq!(r.status, Status::Fail);
        assert!(r.summary.contains("2 of 3"));
        assert_eq!(r.witness.unwrap()["relation"], "b");
    }

    #[test]
    fn expectation_policy() {
        let mut r = VerificationReport::new("x").expecting_failure();
        r.status = Status::Fail;
        assert!(r.as_expected());
        r.status = Status::Pass;
        assert!(!r.as_expected());
    }
}
