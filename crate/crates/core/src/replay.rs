//! Replays the coefficient recursions that express `r_G σ(x)` and
//! `κ(Sq x)` through Steenrod operations on `z = κ(x)`, starting from
//! nothing but `a₀ = 1`.
//!
//! For `x` of degree `2n` write `r_G σ(x) = Σ_i a_i^{(n)}(z) u^{n-i}` and
//! `Sq^{2k} σ(x) = Σ_l σ(x̃_l) u^{2(k-l)}` with `z_l = κ(x̃_l) = b_l^{(n,k)}(z)`.
//! Comparing `u`-coefficients after applying `Sq^{2k}` gives
//!
//! ```text
//! b_l = Σ_{j ≥ max(0, l-n)}^{l} C(n-l+j, 2k-j) Sq^j a_{l-j}^{(n)}
//!     + Σ_{j=1}^{l} a_j^{(n+l-j)} b_{l-j}
//!
//! (C(n,2k) + C(n-i,2k)) a_i^{(n)}
//!     = Σ_{l=1}^{k} a_{i-l}^{(n+l)} b_l + Σ_{j=1}^{2k} C(n-i+j, 2k-j) Sq^j a_{i-j}^{(n)}
//! ```
//!
//! and `a_i = Sq¹ a_{i-1}` for odd `i`. Coefficients for a class of degree
//! `2m` are written `a_i^{(m)}`; the even step for degree `n` needs
//! lower-index coefficients at higher degrees, so everything is memoized by
//! `(m, i)` and derived in increasing `i`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::f2core::{binom_mod2, pick_k, solve_linear, F2Matrix, F2Vector, LinearSolution};
use crate::models::ConjugationModel;
use crate::polyring::{Generator, GradedPolynomial, Monomial, RingSpec};
use crate::report::{ReportBuilder, VerificationReport};
use crate::steenrod::{adem_normalize, injectivity_report, SteenrodElement};

/// How an entry of the ledger was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Unit,
    OddStep,
    EvenSolve,
    Recursion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientEntry {
    pub index: u32,
    pub k_used: Option<u32>,
    pub rule: Rule,
    /// The recursion instance with its nonzero terms, in symbolic form.
    pub instance: String,
    pub raw: SteenrodElement,
    pub normal: SteenrodElement,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerRecord {
    pub i: u32,
    pub k_used: Option<u32>,
    pub rule: Rule,
    pub instance: String,
    pub raw_expression: String,
    pub normal_form: String,
    pub verified: bool,
}

impl From<&CoefficientEntry> for LedgerRecord {
    fn from(e: &CoefficientEntry) -> Self {
        Self {
            i: e.index,
            k_used: e.k_used,
            rule: e.rule,
            instance: e.instance.clone(),
            raw_expression: e.raw.to_string(),
            normal_form: e.normal.to_string(),
            verified: e.verified,
        }
    }
}

/// `a₀ … a_n` and `b₀ … b_n` for classes of degree `2n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientLedger {
    pub n: u32,
    pub a: Vec<CoefficientEntry>,
    pub b: Vec<CoefficientEntry>,
}

impl CoefficientLedger {
    /// `b = b₀ + ⋯ + b_n` in normal form.
    pub fn total_b(&self) -> SteenrodElement {
        let mut out = SteenrodElement::zero();
        for e in &self.b {
            out.add_assign(&e.normal);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "a": self.a.iter().map(LedgerRecord::from).collect::<Vec<_>>(),
            "b": self.b.iter().map(LedgerRecord::from).collect::<Vec<_>>(),
        })
    }
}

fn c2(n: i64, k: i64) -> bool {
    n >= 0 && binom_mod2(n as u64, k)
}

/// Memoized derivation state. Entries are keyed by `(m, i)` for
/// `a_i^{(m)}` and `(n, k)` for the list `b_0^{(n,k)} … b_k^{(n,k)}`.
#[derive(Debug, Default)]
pub struct Replayer {
    a: HashMap<(u32, u32), CoefficientEntry>,
    b: HashMap<(u32, u32), Vec<CoefficientEntry>>,
}

impl Replayer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Normal form of `a_i^{(m)}`; zero when `i > m`.
    fn a_normal(&mut self, m: u32, i: u32) -> Result<SteenrodElement> {
        if i > m {
            return Ok(SteenrodElement::zero());
        }
        Ok(self.a_entry(m, i)?.normal.clone())
    }

    pub fn a_entry(&mut self, m: u32, i: u32) -> Result<&CoefficientEntry> {
        if !self.a.contains_key(&(m, i)) {
            let entry = self.derive_a_entry(m, i, None)?;
            self.a.insert((m, i), entry);
        }
        Ok(&self.a[&(m, i)])
    }

    fn derive_a_entry(&mut self, m: u32, i: u32, forced_k: Option<u32>) -> Result<CoefficientEntry> {
        if i > m {
            return Err(Error::InvalidArgument(format!("a_{i} is undefined for degree 2*{m}")));
        }
        if i == 0 {
            return Ok(CoefficientEntry {
                index: 0,
                k_used: None,
                rule: Rule::Unit,
                instance: "1".into(),
                raw: SteenrodElement::one(),
                normal: SteenrodElement::one(),
                verified: false,
            });
        }
        if i % 2 == 1 {
            let prev = self.a_normal(m, i - 1)?;
            let raw = SteenrodElement::sq(1).compose(&prev);
            return Ok(CoefficientEntry {
                index: i,
                k_used: None,
                rule: Rule::OddStep,
                instance: format!("Sq^1 a_{}", i - 1),
                normal: adem_normalize(&raw),
                raw,
                verified: false,
            });
        }

        let k = match forced_k {
            Some(k) => k,
            None => pick_k(m, i)?,
        };
        let (n, i64i, k64) = (i64::from(m), i64::from(i), i64::from(k));
        debug_assert!(c2(n, 2 * k64) != c2(n - i64i, 2 * k64));
        let bs = self.b_list(m, k)?.clone();
        let mut raw = SteenrodElement::zero();
        let mut terms = Vec::new();
        for l in 1..=k {
            let a = self.a_normal(m + l, i - l)?;
            raw.add_assign(&a.compose(&bs[l as usize].normal));
            terms.push(format!("a_{}^({}) b_{l}", i - l, m + l));
        }
        for j in 1..=2 * k {
            let jj = i64::from(j);
            if !c2(n - i64i + jj, 2 * k64 - jj) {
                continue;
            }
            let a = self.a_normal(m, i - j)?;
            raw.add_assign(&SteenrodElement::sq(j).compose(&a));
            terms.push(format!("Sq^{j} a_{}", i - j));
        }
        Ok(CoefficientEntry {
            index: i,
            k_used: Some(k),
            rule: Rule::EvenSolve,
            instance: terms.join(" + "),
            normal: adem_normalize(&raw),
            raw,
            verified: false,
        })
    }

    /// `b_0^{(n,k)} … b_k^{(n,k)}`.
    fn b_list(&mut self, n: u32, k: u32) -> Result<&Vec<CoefficientEntry>> {
        if !self.b.contains_key(&(n, k)) {
            let list = self.derive_b_list(n, k)?;
            self.b.insert((n, k), list);
        }
        Ok(&self.b[&(n, k)])
    }

    fn derive_b_list(&mut self, n: u32, k: u32) -> Result<Vec<CoefficientEntry>> {
        let mut out: Vec<CoefficientEntry> = Vec::with_capacity(k as usize + 1);
        let (n64, k64) = (i64::from(n), i64::from(k));
        for l in 0..=k {
            let l64 = i64::from(l);
            let mut raw = SteenrodElement::zero();
            let mut terms = Vec::new();
            for j in l.saturating_sub(n)..=l {
                let jj = i64::from(j);
                if !c2(n64 - l64 + jj, 2 * k64 - jj) {
                    continue;
                }
                let a = self.a_normal(n, l - j)?;
                raw.add_assign(&SteenrodElement::sq(j).compose(&a));
                terms.push(match j {
                    0 => format!("a_{l}"),
                    _ => format!("Sq^{j} a_{}", l - j),
                });
            }
            for j in 1..=l {
                let a = self.a_normal(n + l - j, j)?;
                if a.is_zero() {
                    continue;
                }
                raw.add_assign(&a.compose(&out[(l - j) as usize].normal));
                terms.push(format!("a_{j}^({}) b_{}", n + l - j, l - j));
            }
            out.push(CoefficientEntry {
                index: l,
                k_used: Some(k),
                rule: Rule::Recursion,
                instance: if terms.is_empty() { "0".into() } else { terms.join(" + ") },
                normal: adem_normalize(&raw),
                raw,
                verified: false,
            });
        }
        Ok(out)
    }

    /// Runs the `a`-recursion for classes of degree `2n`.
    pub fn derive_a(&mut self, n: u32) -> Result<CoefficientLedger> {
        if n == 0 {
            return Err(Error::InvalidArgument("derive_a needs n >= 1".into()));
        }
        let a = (0..=n)
            .map(|i| self.a_entry(n, i).cloned())
            .collect::<Result<Vec<_>>>()?;
        Ok(CoefficientLedger { n, a, b: Vec::new() })
    }

    /// `b_0^{(n,k)} … b_{up_to}^{(n,k)}` in normal form.
    pub fn derive_b(&mut self, n: u32, k: u32, up_to: u32) -> Result<Vec<SteenrodElement>> {
        if up_to > k {
            return Err(Error::InvalidArgument(format!("up_to {up_to} exceeds k = {k}")));
        }
        Ok(self.b_list(n, k)?[..=up_to as usize].iter().map(|e| e.normal.clone()).collect())
    }

    /// The components of `b` with `κ(Sq^{2l} x) = b_l(z)`: the top entry of
    /// the recursion run with `k = l`.
    pub fn derive_total_b(&mut self, n: u32) -> Result<Vec<CoefficientEntry>> {
        (0..=n)
            .map(|l| Ok(self.b_list(n, l)?[l as usize].clone()))
            .collect()
    }

    /// The normal form of `a_i^{(n)}` for every admissible choice of `k`.
    pub fn alternative_k_forms(&mut self, n: u32, i: u32) -> Result<Vec<(u32, SteenrodElement)>> {
        if i == 0 || i % 2 != 0 || i > n {
            return Err(Error::InvalidArgument(format!("need even 0 < i <= n, got n={n}, i={i}")));
        }
        let mut out = Vec::new();
        for k in 1..=i / 2 {
            let two_k = 2 * i64::from(k);
            if c2(i64::from(n), two_k) == c2(i64::from(n - i), two_k) {
                continue;
            }
            out.push((k, self.derive_a_entry(n, i, Some(k))?.normal));
        }
        Ok(out)
    }
}

fn product_ring(n: u32) -> Result<(Arc<RingSpec>, GradedPolynomial)> {
    let ring = RingSpec::new(
        (1..=n).map(|i| Generator::new(format!("t{i}"), 1)).collect(),
        2 * n,
    )?;
    let z = GradedPolynomial::from_exponents(&ring, vec![1; n as usize]);
    Ok((ring, z))
}

#[derive(Debug, Clone)]
pub struct LemmaReplay {
    pub ledger: CoefficientLedger,
    pub report: VerificationReport,
}

impl LemmaReplay {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.ledger.to_json();
        v["verdict"] = serde_json::to_value(self.report.verdict).expect("verdict serializes");
        v["report"] = serde_json::to_value(&self.report).expect("report serializes");
        v
    }
}

/// Derives `a₀ … a_n` and `b₀ … b_n` and checks them:
///
/// - every `a_i` normalizes to `Sq^i`, and its unnormalized form agrees
///   with `Sq^i` on `z = t₁⋯t_n`;
/// - every `b_l` normalizes to `Sq^l`, and `b(z)` equals the total square
///   of `z`;
/// - evaluation on `z` is injective on the admissible basis up to degree
///   `n`, which promotes the evaluation checks to identities in the algebra.
pub fn verify_lemma(n: u32) -> Result<LemmaReplay> {
    verify_lemma_with(&mut Replayer::new(), n)
}

pub fn verify_lemma_with(replayer: &mut Replayer, n: u32) -> Result<LemmaReplay> {
    let mut ledger = replayer.derive_a(n)?;
    ledger.b = replayer.derive_total_b(n)?;
    let (_, z) = product_ring(n)?;
    let mut report = ReportBuilder::new("lemma", format!("a_i, b_l for classes of degree {}", 2 * n), n);

    for e in ledger.a.iter_mut() {
        let target = SteenrodElement::sq(e.index);
        let algebra_ok = e.normal == target;
        let eval_ok = e.raw.act(&z)? == target.act(&z)?;
        e.verified = algebra_ok && eval_ok;
        if e.verified {
            report.pass();
        } else {
            report.fail(
                format!("a_{}", e.index),
                target.to_string(),
                format!("{} (evaluation {})", e.normal, if eval_ok { "agrees" } else { "differs" }),
            );
        }
    }

    for e in ledger.b.iter_mut() {
        let target = SteenrodElement::sq(e.index);
        let algebra_ok = e.normal == target;
        let eval_ok = e.raw.act(&z)? == target.act(&z)?;
        e.verified = algebra_ok && eval_ok;
        if e.verified {
            report.pass();
        } else {
            report.fail(format!("b_{}", e.index), target.to_string(), e.normal.to_string());
        }
    }

    let b = ledger.total_b();
    let bz = b.act(&z)?;
    let sq = z.total_sq()?;
    if bz == sq && !bz.truncated() && !sq.truncated() {
        report.pass();
    } else {
        report.fail(format!("b({z})"), sq.to_string(), bz.to_string());
    }

    let inj = injectivity_report(n, n)?;
    report.detail(json!({ "injective_up_to_degree": n, "verdict": inj.verdict }));
    if inj.passed() {
        report.pass();
    } else {
        report.fail("evaluation map", "injective", "not injective");
    }
    report.detail(json!({
        "a": ledger.a.iter().map(|e| e.normal.to_string()).collect::<Vec<_>>(),
        "b": b.to_string(),
    }));

    Ok(LemmaReplay {
        ledger,
        report: report.finish(),
    })
}

/// `Sq^{2k} σ(x) = Σ_{l} σ(x̃_l) u^{2(k-l)}`, solved over the monomial basis.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub half_degree: u32,
    pub k: u32,
    /// `(l, x̃_l)` for `l = -n … k`.
    pub components: Vec<(i64, GradedPolynomial)>,
    /// `Sq^{2k}(x)` computed directly in `H^*(X)`.
    pub sq_of_x: GradedPolynomial,
}

impl Decomposition {
    pub fn tilde(&self, l: i64) -> Option<&GradedPolynomial> {
        self.components.iter().find(|(j, _)| *j == l).map(|(_, p)| p)
    }

    /// No terms with `l < 0` are needed.
    pub fn lower_terms_vanish(&self) -> bool {
        self.components.iter().all(|(l, p)| *l >= 0 || p.is_zero())
    }

    /// `x̃_k = Sq^{2k}(x)`.
    pub fn top_matches_sq(&self) -> bool {
        self.tilde(i64::from(self.k)) == Some(&self.sq_of_x)
    }
}

/// Computes `Sq^{2k}` of `r_G σ(x)` in `H^*(X^τ) ⊗ F₂[u]` and expresses it
/// uniquely as `Σ r_G σ(m) u^{2(k-l)}` over monomials `m` of degree
/// `2(n+l)`, `-n <= l <= k`.
pub fn decompose_sq_sigma(model: &ConjugationModel, x: &GradedPolynomial, k: u32) -> Result<Decomposition> {
    let d = match x.degree() {
        Some(d) if d % 2 == 0 => d,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "decomposition needs a nonzero homogeneous class of even degree, got {x}"
            )))
        }
    };
    let n = d / 2;
    let required = d + 2 * k;
    if required > model.truncation() {
        return Err(Error::TruncationTooSmall {
            truncation: model.truncation(),
            required,
        });
    }

    let target = model.rg_sigma(x)?.poly().sq(2 * k)?;
    let u_index = model.fring().len();
    let mut columns: Vec<(i64, Monomial, GradedPolynomial)> = Vec::new();
    for l in -i64::from(n)..=i64::from(k) {
        let deg = (2 * (i64::from(n) + l)) as u32;
        let mut shift = vec![0; model.eqring().len()];
        shift[u_index] = (2 * (i64::from(k) - l)) as u32;
        for m in model.xring().monomials_of_degree(deg) {
            let class = GradedPolynomial::from_monomial(model.xring(), &m);
            let image = model.rg_sigma(&class)?.poly().shift(&shift);
            columns.push((l, m, image));
        }
    }
    if target.truncated() || columns.iter().any(|(_, _, p)| p.truncated()) {
        return Err(Error::TruncationTooSmall {
            truncation: model.truncation(),
            required,
        });
    }

    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in columns.iter().map(|(_, _, p)| p).chain(std::iter::once(&target)) {
        for m in p.terms() {
            let next = rows.len();
            rows.entry(m.clone()).or_insert(next);
        }
    }
    let to_vec = |p: &GradedPolynomial| {
        let mut v = F2Vector::zeros(rows.len());
        for m in p.terms() {
            v.set(rows[m], true);
        }
        v
    };
    let matrix = F2Matrix::from_columns(rows.len(), &columns.iter().map(|(_, _, p)| to_vec(p)).collect::<Vec<_>>())?;
    let solved = solve_linear(&matrix, &to_vec(&target))?;
    let solution = match solved.solution {
        LinearSolution::Unique(s) => s,
        LinearSolution::Family { kernel, .. } => {
            return Err(Error::NonUniqueDecomposition {
                k: 2 * k,
                kernel: kernel.len(),
            })
        }
        LinearSolution::Inconsistent => return Err(Error::NotInSpan { k: 2 * k }),
    };

    let mut components: Vec<(i64, GradedPolynomial)> = (-i64::from(n)..=i64::from(k))
        .map(|l| (l, GradedPolynomial::zero(model.xring())))
        .collect();
    for idx in solution.ones() {
        let (l, m, _) = &columns[idx];
        let slot = &mut components[(l + i64::from(n)) as usize].1;
        slot.add_assign(&GradedPolynomial::from_monomial(model.xring(), m))?;
    }
    Ok(Decomposition {
        half_degree: n,
        k,
        components,
        sq_of_x: x.sq(2 * k)?,
    })
}

/// Runs [`decompose_sq_sigma`] for every monomial class of degree
/// `2, 4, …, 2·max_half_degree` and `k = 1..=max_k`, checking both
/// structural claims.
pub fn decomposition_report(model: &ConjugationModel, max_half_degree: u32, max_k: u32) -> Result<VerificationReport> {
    let mut report = ReportBuilder::new("decomposition", model.label(), 2 * max_half_degree);
    for h in 1..=max_half_degree {
        for m in model.xring().monomials_of_degree(2 * h) {
            let x = GradedPolynomial::from_monomial(model.xring(), &m);
            for k in 1..=max_k {
                match decompose_sq_sigma(model, &x, k) {
                    Ok(dec) if dec.lower_terms_vanish() && dec.top_matches_sq() => report.pass(),
                    Ok(dec) => report.fail(
                        format!("Sq^{} sigma({x})", 2 * k),
                        format!("no l<0 terms, x~_{k} = {}", dec.sq_of_x),
                        format!("{:?}", dec.components),
                    ),
                    Err(Error::TruncationTooSmall { .. }) => report.skip(2 * (h + k)),
                    Err(e) => report.fail(format!("Sq^{} sigma({x})", 2 * k), "unique decomposition", e.to_string()),
                }
            }
        }
    }
    Ok(report.finish())
}
