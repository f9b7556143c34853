//! Checkers for the conjugation equation and the identities built on it.
//!
//! Each checker walks every monomial basis class of `H^*(X)` in even
//! degrees up to a bound. A class whose computation touched the truncation
//! degree is reported under `skipped_degrees` and never counted as passed.

use serde_json::json;

use crate::error::{Error, Result};
use crate::models::{ConjugationModel, EquivariantClass};
use crate::polyring::GradedPolynomial;
use crate::report::{ReportBuilder, VerificationReport};

pub use crate::report::{Verdict, Witness};

/// Why a candidate fails the conjugation equation. `u_power` is the first
/// offending coefficient scanning down from the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub u_power: u32,
    pub expected: GradedPolynomial,
    pub actual: GradedPolynomial,
    /// Everything above `u^n` in the candidate.
    pub residual: GradedPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquationCheck {
    /// Holds; `ys[i-1]` is the coefficient `y_i` of `u^{n-i}`.
    Holds { ys: Vec<GradedPolynomial> },
    Violated(Violation),
}

impl EquationCheck {
    pub fn holds(&self) -> bool {
        matches!(self, EquationCheck::Holds { .. })
    }
}

/// Tests `candidate = κ(x) uⁿ + y₁ uⁿ⁻¹ + ⋯ + yₙ` for `x` of degree `2n`.
pub fn check_conjugation_equation(
    model: &ConjugationModel,
    x: &GradedPolynomial,
    candidate: &EquivariantClass,
) -> Result<EquationCheck> {
    let d = match x.degree() {
        Some(d) if d % 2 == 0 => d,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "conjugation equation needs a homogeneous class of even degree, got {x}"
            )))
        }
    };
    let n = d / 2;
    if !candidate.poly().is_homogeneous() || candidate.poly().degree().is_some_and(|e| e != d) {
        return Err(Error::Inhomogeneous(format!("{candidate} (expected degree {d})")));
    }
    let kappa = model.kappa(x)?;
    let top = candidate.u_degree().unwrap_or(0);
    let residual = candidate.above(n);
    for j in (n + 1..=top).rev() {
        let c = candidate.coeff(j);
        if !c.is_zero() {
            return Ok(EquationCheck::Violated(Violation {
                u_power: j,
                expected: GradedPolynomial::zero(model.fring()),
                actual: c,
                residual,
            }));
        }
    }
    let lead = candidate.coeff(n);
    if lead != kappa {
        return Ok(EquationCheck::Violated(Violation {
            u_power: n,
            expected: kappa,
            actual: lead,
            residual,
        }));
    }
    Ok(EquationCheck::Holds {
        ys: (1..=n).map(|i| candidate.coeff(n - i)).collect(),
    })
}

/// Monomial basis classes in even degrees `<= max_degree`; degrees beyond
/// the truncation are recorded as skipped.
fn even_classes(model: &ConjugationModel, max_degree: u32, report: &mut ReportBuilder) -> Vec<GradedPolynomial> {
    let mut out = Vec::new();
    for d in (0..=max_degree).step_by(2) {
        if d > model.truncation() {
            report.skip(d);
            continue;
        }
        out.extend(
            model
                .xring()
                .monomials_of_degree(d)
                .iter()
                .map(|m| GradedPolynomial::from_monomial(model.xring(), m)),
        );
    }
    out
}

fn kappa_or_fail(model: &ConjugationModel, x: &GradedPolynomial, report: &mut ReportBuilder) -> Option<GradedPolynomial> {
    match model.kappa(x) {
        Ok(k) => Some(k),
        Err(_) => {
            report.fail(x.to_string(), "a degree-halving kappa", "none exists for this model");
            None
        }
    }
}

/// `r_G(σ(x)) = Σ_{i=0}^{n} Sq^i(κ(x)) u^{n-i}` for every class of degree `2n`.
pub fn verify_theorem1(model: &ConjugationModel, max_degree: u32) -> Result<VerificationReport> {
    let mut report = ReportBuilder::new("theorem1", model.label(), max_degree);
    for x in even_classes(model, max_degree, &mut report) {
        let d = x.degree().unwrap_or(0);
        let Some(z) = kappa_or_fail(model, &x, &mut report) else {
            continue;
        };
        let lhs = model.rg_sigma(&x)?;
        let rhs = model.homogenised_total_sq(&z, d / 2)?;
        if lhs.truncated() || rhs.truncated() {
            report.skip(d);
        } else if lhs == rhs {
            report.pass();
        } else {
            report.fail(x.to_string(), rhs.to_string(), lhs.to_string());
        }
    }
    Ok(report.finish())
}

/// `r(x) = κ(x)²`.
pub fn verify_corollary(model: &ConjugationModel, max_degree: u32) -> Result<VerificationReport> {
    let mut report = ReportBuilder::new("corollary", model.label(), max_degree);
    for x in even_classes(model, max_degree, &mut report) {
        let d = x.degree().unwrap_or(0);
        let Some(z) = kappa_or_fail(model, &x, &mut report) else {
            continue;
        };
        let lhs = model.restrict_r(&x)?;
        let rhs = z.multiply(&z)?;
        if lhs.truncated() || rhs.truncated() {
            report.skip(d);
        } else if lhs == rhs {
            report.pass();
        } else {
            report.fail(x.to_string(), rhs.to_string(), lhs.to_string());
        }
    }
    Ok(report.finish())
}

/// `κ(Sq(x)) = Sq(κ(x))`, degreewise `κ(Sq^{2k} x) = Sq^k κ(x)`, and
/// `Sq^{2k+1} x = 0`.
pub fn verify_theorem2(model: &ConjugationModel, max_degree: u32) -> Result<VerificationReport> {
    let mut report = ReportBuilder::new("theorem2", model.label(), max_degree);
    for x in even_classes(model, max_degree, &mut report) {
        let d = x.degree().unwrap_or(0);
        let Some(z) = kappa_or_fail(model, &x, &mut report) else {
            continue;
        };
        let mut tainted = false;
        let mut failure: Option<(String, String, String)> = None;

        let lhs = model.kappa(&x.total_sq()?)?;
        let rhs = z.total_sq()?;
        tainted |= lhs.truncated() || rhs.truncated();
        if lhs != rhs {
            failure = Some((format!("Sq({x})"), rhs.to_string(), lhs.to_string()));
        }
        for k in 0..=d / 2 + 1 {
            let even = model.kappa(&x.sq(2 * k)?)?;
            let half = z.sq(k)?;
            tainted |= even.truncated() || half.truncated();
            if failure.is_none() && even != half {
                failure = Some((format!("Sq^{} {x}", 2 * k), half.to_string(), even.to_string()));
            }
            let odd = x.sq(2 * k + 1)?;
            tainted |= odd.truncated();
            if failure.is_none() && !odd.is_zero() {
                failure = Some((format!("Sq^{} {x}", 2 * k + 1), "0".into(), odd.to_string()));
            }
        }
        if tainted {
            report.skip(d);
        } else if let Some((class, expected, actual)) = failure {
            report.fail(class, expected, actual);
        } else {
            report.pass();
        }
    }
    Ok(report.finish())
}

/// Exhausts every additive section on each generator and checks the
/// conjugation equation against all of them.
///
/// The verdict is `pass` when the outcome agrees with what the model claims:
/// for a claimed conjugation space the canonical section must satisfy the
/// equation on every generator; otherwise some generator must defeat every
/// section.
pub fn counterexample_report(model: &ConjugationModel) -> Result<VerificationReport> {
    let max_degree = model.xring().generators().iter().map(|g| g.degree).max().unwrap_or(0);
    let mut report = ReportBuilder::new("counterexample", model.label(), max_degree);

    // The unit: σ(1) = 1 is forced.
    let unit = GradedPolynomial::one(model.xring());
    let unit_fams = model.enumerate_sections(0)?;
    let unit_ok = unit_fams.iter().all(|f| {
        f.candidates.iter().all(|c| {
            model.has_kappa()
                && check_conjugation_equation(model, &unit, &c.image).is_ok_and(|r| r.holds())
        })
    });
    if unit_ok {
        report.pass();
    } else {
        report.fail("1", "1", "unit fails the conjugation equation");
    }

    let mut obstructed = Vec::new();
    let mut canonical_fails = Vec::new();
    for (i, g) in model.xring().generators().iter().enumerate() {
        let gen = GradedPolynomial::generator(model.xring(), i);
        if g.degree % 2 != 0 {
            obstructed.push(g.name.clone());
            report.witness(&g.name, "a class of even degree", format!("degree {}", g.degree));
            continue;
        }
        let families = model.enumerate_sections(g.degree)?;
        let family = families
            .into_iter()
            .find(|f| f.class == gen)
            .expect("generator is a basis class");
        let mut any_holds = false;
        let mut failures = Vec::new();
        for cand in &family.candidates {
            let verdict = if model.has_kappa() {
                check_conjugation_equation(model, &gen, &cand.image)?
            } else {
                EquationCheck::Violated(Violation {
                    u_power: g.degree / 2,
                    expected: GradedPolynomial::zero(model.fring()),
                    actual: GradedPolynomial::zero(model.fring()),
                    residual: cand.image.above(g.degree / 2),
                })
            };
            match verdict {
                EquationCheck::Holds { .. } => any_holds = true,
                EquationCheck::Violated(v) => {
                    if cand.is_canonical() {
                        canonical_fails.push(g.name.clone());
                    }
                    failures.push((cand, v));
                }
            }
        }
        report.detail(json!({
            "class": g.name,
            "candidates": family.candidates.len(),
            "violating": failures.len(),
        }));
        if !any_holds {
            obstructed.push(g.name.clone());
            for (cand, v) in &failures {
                let expected = match model.kappa(&gen) {
                    Ok(k) => format!("leading term ({k})*u^{}", g.degree / 2),
                    Err(_) => "a degree-halving kappa".to_string(),
                };
                report.witness(
                    &g.name,
                    expected,
                    format!(
                        "{} [u^{} coefficient {}, residual {}]",
                        cand.image, v.u_power, v.actual, v.residual
                    ),
                );
            }
        }
    }

    let multiplicative = model.find_multiplicative_section()?;
    report.detail(json!({
        "multiplicative_section_exists": multiplicative.is_some(),
        "multiplicative_section": multiplicative
            .as_ref()
            .map(|s| s.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
    }));

    let is_conjugation = obstructed.is_empty() && canonical_fails.is_empty();
    if !obstructed.is_empty() {
        report.conclusion(format!(
            "not a conjugation space: every section violates the conjugation equation on {}",
            obstructed.join(", ")
        ));
    } else if is_conjugation {
        report.conclusion("the canonical section satisfies the conjugation equation on every generator");
    } else {
        report.conclusion(format!(
            "canonical section fails on {} but other sections satisfy the equation",
            canonical_fails.join(", ")
        ));
    }

    if model.claims_conjugation() {
        if !is_conjugation {
            report.mark_failed();
            if obstructed.is_empty() {
                report.witness(canonical_fails.join(", "), "canonical section satisfies the equation", "violated");
            }
        } else {
            report.pass();
        }
    } else if obstructed.is_empty() {
        report.mark_failed();
        report.witness(
            "all generators",
            "some generator defeating every section",
            "each generator admits a section satisfying the equation",
        );
    } else {
        report.pass();
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelSpec;

    fn eqc(model: &ConjugationModel, s: &str) -> EquivariantClass {
        EquivariantClass::new(GradedPolynomial::parse(model.eqring(), s).unwrap(), model.fring()).unwrap()
    }

    #[test]
    fn equation_on_projective_line() {
        let m = ConjugationModel::projective(1, 8).unwrap();
        let v = m.parse_class("v1").unwrap();
        match check_conjugation_equation(&m, &v, &eqc(&m, "t1*u + t1^2")).unwrap() {
            EquationCheck::Holds { ys } => {
                assert_eq!(ys.len(), 1);
                assert_eq!(ys[0].to_string(), "t1^2");
            }
            other => panic!("{other:?}"),
        }
        let one = m.parse_class("1").unwrap();
        assert!(check_conjugation_equation(&m, &one, &eqc(&m, "1")).unwrap().holds());
    }

    #[test]
    fn equation_fails_for_tau() {
        let m = ConjugationModel::from_spec(&ModelSpec::sphere_tau()).unwrap();
        let s4 = m.parse_class("s4").unwrap();
        let EquationCheck::Violated(v) = check_conjugation_equation(&m, &s4, &eqc(&m, "s1*u^3")).unwrap() else {
            panic!("expected violation")
        };
        assert_eq!(v.u_power, 3);
        assert_eq!(v.actual.to_string(), "s1");
    }

    #[test]
    fn theorem1_examples() {
        let m = ConjugationModel::projective(2, 16).unwrap();
        let r = verify_theorem1(&m, 8).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.scope.classes, 1 + 2 + 3 + 4 + 5);

        let m = ConjugationModel::from_spec(&ModelSpec::sphere_tau_tilde()).unwrap();
        let r = verify_theorem1(&m, 6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.scope.classes, 4);

        let m = ConjugationModel::from_spec(&ModelSpec::sphere_tau()).unwrap();
        let r = verify_theorem1(&m, 6).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witnesses.iter().any(|w| w.class == "s4" && w.actual == "s1*u^3"));
    }

    #[test]
    fn corollary_and_theorem2() {
        let m = ConjugationModel::projective(2, 20).unwrap();
        assert!(verify_corollary(&m, 8).unwrap().passed());
        assert!(verify_theorem2(&m, 8).unwrap().passed());
        let x = m.parse_class("v1*v2").unwrap();
        assert_eq!(m.kappa(&x.sq(2).unwrap()).unwrap(), m.kappa(&x).unwrap().sq(1).unwrap());
        assert_eq!(m.kappa(&x.sq(2).unwrap()).unwrap().to_string(), "t1^2*t2 + t1*t2^2");
    }

    #[test]
    fn tainted_degrees_are_skipped() {
        // D = 6: Theorem 2 needs Sq of degree-4 classes up to degree 8.
        let m = ConjugationModel::projective(1, 6).unwrap();
        let r = verify_theorem2(&m, 4).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.skipped_degrees, vec![4]);
        let r = verify_theorem1(&m, 10).unwrap();
        assert!(r.skipped_degrees.contains(&8));
    }

    #[test]
    fn counterexample_tau() {
        let m = ConjugationModel::from_spec(&ModelSpec::sphere_tau()).unwrap();
        let r = counterexample_report(&m).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.conclusion.as_deref().unwrap().starts_with("not a conjugation space"));
        let s4: Vec<_> = r.witnesses.iter().filter(|w| w.class == "s4").collect();
        assert_eq!(s4.len(), 4);
        assert!(s4.iter().all(|w| w.actual.contains("s1*u^3")));
    }

    #[test]
    fn counterexample_tau_tilde() {
        let m = ConjugationModel::from_spec(&ModelSpec::sphere_tau_tilde()).unwrap();
        let r = counterexample_report(&m).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn counterexample_projective_rejected() {
        let m = ConjugationModel::projective(1, 8).unwrap();
        assert!(matches!(counterexample_report(&m), Err(Error::InfiniteEnumeration(_))));
    }
}
