//! Structured verdicts shared by every checker.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    /// Nothing could be checked because every relevant degree was touched
    /// by truncation.
    #[serde(rename = "skipped-tainted")]
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub class: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scope {
    pub max_degree: u32,
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub model: String,
    pub scope: Scope,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub skipped_degrees: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<serde_json::Value>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "[{}] {} on {} ({} classes, max degree {})",
            self.verdict, self.subject, self.model, self.scope.classes, self.scope.max_degree
        );
        if let Some(c) = &self.conclusion {
            out.push_str(&format!("\n    conclusion: {c}"));
        }
        for d in &self.details {
            out.push_str(&format!("\n    {d}"));
        }
        if !self.skipped_degrees.is_empty() {
            out.push_str(&format!("\n    skipped (truncated) degrees: {:?}", self.skipped_degrees));
        }
        for w in &self.witnesses {
            out.push_str(&format!(
                "\n    witness {}: expected {}, actual {}",
                w.class, w.expected, w.actual
            ));
        }
        out
    }
}

/// Accumulates per-class outcomes and settles the verdict at the end.
#[derive(Debug)]
pub struct ReportBuilder {
    subject: String,
    model: String,
    max_degree: u32,
    checked: usize,
    failed: bool,
    witnesses: Vec<Witness>,
    skipped: BTreeSet<u32>,
    conclusion: Option<String>,
    details: Vec<serde_json::Value>,
}

impl ReportBuilder {
    pub fn new(subject: impl Into<String>, model: impl Into<String>, max_degree: u32) -> Self {
        Self {
            subject: subject.into(),
            model: model.into(),
            max_degree,
            checked: 0,
            failed: false,
            witnesses: Vec::new(),
            skipped: BTreeSet::new(),
            conclusion: None,
            details: Vec::new(),
        }
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, class: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>) {
        self.checked += 1;
        self.failed = true;
        self.witness(class, expected, actual);
    }

    /// Records a witness without affecting the verdict.
    pub fn witness(&mut self, class: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>) {
        self.witnesses.push(Witness {
            class: class.into(),
            expected: expected.into(),
            actual: actual.into(),
        });
    }

    /// Marks the check as failed, e.g. for a failure that is not tied to a
    /// single class. The caller must still supply a witness.
    pub fn mark_failed(&mut self) {
        self.failed = true;
    }

    pub fn skip(&mut self, degree: u32) {
        self.skipped.insert(degree);
    }

    pub fn conclusion(&mut self, text: impl Into<String>) {
        self.conclusion = Some(text.into());
    }

    pub fn detail(&mut self, value: serde_json::Value) {
        self.details.push(value);
    }

    pub fn finish(self) -> VerificationReport {
        let verdict = if self.failed {
            Verdict::Fail
        } else if self.checked == 0 && !self.skipped.is_empty() {
            Verdict::Skipped
        } else {
            Verdict::Pass
        };
        debug_assert!(verdict != Verdict::Fail || !self.witnesses.is_empty());
        VerificationReport {
            subject: self.subject,
            model: self.model,
            scope: Scope {
                max_degree: self.max_degree,
                classes: self.checked,
            },
            verdict,
            witnesses: self.witnesses,
            skipped_degrees: self.skipped.into_iter().collect(),
            conclusion: self.conclusion,
            details: self.details,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_carries_witness() {
        let mut b = ReportBuilder::new("t", "m", 4);
        b.pass();
        b.fail("x", "1", "0");
        let r = b.finish();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(r.scope.classes, 2);
    }

    #[test]
    fn only_skips_is_skipped() {
        let mut b = ReportBuilder::new("t", "m", 4);
        b.skip(4);
        assert_eq!(b.finish().verdict, Verdict::Skipped);
    }

    #[test]
    fn json_schema_fields() {
        let mut b = ReportBuilder::new("theorem1", "projective(n=1)", 2);
        b.pass();
        let v = serde_json::to_value(b.finish()).unwrap();
        for key in ["subject", "model", "scope", "verdict", "witnesses", "skipped_degrees"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["scope"]["classes"], 1);
    }
}
