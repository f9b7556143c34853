use std::collections::HashMap;

use serde_json::json;

use super::{admissible_basis, SteenrodElement};
use crate::error::{Error, Result};
use crate::f2core::{F2Matrix, F2Vector};
use crate::polyring::{Generator, GradedPolynomial, RingSpec};
use crate::report::{ReportBuilder, VerificationReport};

/// Checks that evaluation on `t₁⋯t_n ∈ H^*((RP^∞)^n)` separates the
/// admissible basis in every degree `m <= max_degree`, by computing the rank
/// of the evaluation matrix.
pub fn injectivity_report(n: u32, max_degree: u32) -> Result<VerificationReport> {
    if max_degree > n {
        return Err(Error::InvalidArgument(format!(
            "max degree {max_degree} exceeds n = {n}"
        )));
    }
    let ring = RingSpec::new(
        (1..=n).map(|i| Generator::new(format!("t{i}"), 1)).collect(),
        2 * n,
    )?;
    let product = GradedPolynomial::from_exponents(&ring, vec![1; n as usize]);
    let mut report = ReportBuilder::new(
        "injectivity",
        format!("(RP^inf)^{n}, class t1*...*t{n}"),
        max_degree,
    );

    for m in 0..=max_degree {
        let basis = admissible_basis(m);
        let images = basis
            .iter()
            .map(|op| SteenrodElement::from(op.clone()).act(&product))
            .collect::<Result<Vec<_>>>()?;
        // Monomials absent from every image give zero rows; leave them out.
        let mut row_of = HashMap::new();
        for mono in images.iter().flat_map(|p| p.terms()) {
            let next = row_of.len();
            row_of.entry(mono.clone()).or_insert(next);
        }
        let columns: Vec<F2Vector> = images
            .iter()
            .map(|image| {
                let mut col = F2Vector::zeros(row_of.len());
                for mono in image.terms() {
                    col.set(row_of[mono], true);
                }
                col
            })
            .collect();
        let matrix = F2Matrix::from_columns(row_of.len(), &columns)?;
        let rank = matrix.rank();
        report.detail(json!({ "degree": m, "rank": rank, "basis_size": basis.len() }));
        if rank == basis.len() {
            report.pass();
        } else {
            let kernel: Vec<String> = matrix
                .kernel_basis()
                .iter()
                .map(|v| {
                    let mut e = SteenrodElement::zero();
                    for i in v.ones() {
                        e.toggle(basis[i].clone());
                    }
                    e.to_string()
                })
                .collect();
            report.fail(
                format!("degree {m}"),
                format!("rank {}", basis.len()),
                format!("rank {rank}, kernel {}", kernel.join("; ")),
            );
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    fn ranks(r: &VerificationReport) -> Vec<u64> {
        r.details.iter().map(|d| d["rank"].as_u64().unwrap()).collect()
    }

    #[test]
    fn small_cases() {
        let r = injectivity_report(2, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(ranks(&r), [1, 1, 1]);

        let r = injectivity_report(1, 1).unwrap();
        assert_eq!(ranks(&r), [1, 1]);
    }

    #[test]
    fn empty_product() {
        let r = injectivity_report(0, 0).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(ranks(&r), [1]);
        assert!(injectivity_report(0, 1).is_err());
    }
}
