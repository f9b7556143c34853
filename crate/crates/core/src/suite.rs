//! The fixed battery behind `verify all`.

use serde::Serialize;

use crate::error::Result;
use crate::models::{ConjugationModel, ModelSpec};
use crate::replay::{verify_lemma_with, Replayer};
use crate::report::{Verdict, VerificationReport};
use crate::steenrod::injectivity_report;
use crate::verify::{counterexample_report, verify_corollary, verify_theorem1, verify_theorem2};

pub const PROJECTIVE_FACTORS: [u32; 3] = [1, 2, 3];
pub const INJECTIVITY_MAX_N: u32 = 5;
pub const LEMMA_MAX_N: u32 = 6;

/// Scope used for projective models: classes up to degree `2(n+3)`, and a
/// truncation degree `2(max + n)` so that no checked image is tainted.
pub fn projective_scope(n: u32) -> (u32, u32) {
    let max_degree = 2 * (n + 3);
    (max_degree, 2 * (max_degree + n))
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub verdict: Verdict,
    pub reports: Vec<VerificationReport>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.to_text());
            out.push('\n');
        }
        out.push_str(&format!("overall: {}\n", self.verdict));
        out
    }
}

fn theorem_reports(model: &ConjugationModel, max_degree: u32, out: &mut Vec<VerificationReport>) -> Result<()> {
    out.push(verify_theorem1(model, max_degree)?);
    out.push(verify_theorem2(model, max_degree)?);
    out.push(verify_corollary(model, max_degree)?);
    Ok(())
}

pub fn verify_all() -> Result<SuiteResult> {
    let mut reports = Vec::new();
    for n in PROJECTIVE_FACTORS {
        let (max_degree, truncation) = projective_scope(n);
        theorem_reports(&ConjugationModel::projective(n, truncation)?, max_degree, &mut reports)?;
    }
    let tilde = ConjugationModel::from_spec(&ModelSpec::sphere_tau_tilde())?;
    theorem_reports(&tilde, tilde.truncation() / 2, &mut reports)?;

    for n in 1..=INJECTIVITY_MAX_N {
        reports.push(injectivity_report(n, n)?);
    }
    let mut replayer = Replayer::new();
    for n in 1..=LEMMA_MAX_N {
        reports.push(verify_lemma_with(&mut replayer, n)?.report);
    }
    reports.push(counterexample_report(&ConjugationModel::from_spec(&ModelSpec::sphere_tau())?)?);

    let verdict = if reports.iter().all(VerificationReport::passed) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(SuiteResult { verdict, reports })
}
