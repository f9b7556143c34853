//! Graded multivariate polynomial quotient rings over F₂.
//!
//! A ring is `F₂[g₁,…,g_r] / (g_i^{m_i}, everything of degree > D)`. Both
//! ideals are closed under the total Steenrod square, so products and
//! squares computed here are exact in every degree `<= D`. Whenever a
//! monomial is dropped only because it exceeds `D`, the result carries a
//! `truncated` flag so callers can refuse to draw conclusions from it.

mod text;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::f2core::binom_mod2;

pub use text::parse_ring_spec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// `Some(m)` means `g^m = 0`.
    pub nilpotency: Option<u32>,
    /// Whether `Sq(g) = g + g²` holds for this generator.
    pub squares: bool,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self {
            name: name.into(),
            degree,
            nilpotency: None,
            squares: true,
        }
    }

    pub fn nilpotent(mut self, bound: u32) -> Self {
        self.nilpotency = Some(bound);
        self
    }

    pub fn without_square_rule(mut self) -> Self {
        self.squares = false;
        self
    }
}

/// Generators, their degrees and nilpotency bounds, and the truncation
/// degree `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    generators: Vec<Generator>,
    truncation: u32,
}

impl RingSpec {
    pub fn new(generators: Vec<Generator>, truncation: u32) -> Result<Arc<Self>> {
        for (i, g) in generators.iter().enumerate() {
            if g.name.is_empty()
                || !g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                || g.name.chars().next().is_some_and(|c| c.is_ascii_digit())
            {
                return Err(Error::InvalidArgument(format!(
                    "bad generator name `{}`",
                    g.name
                )));
            }
            if g.degree == 0 {
                return Err(Error::InvalidArgument(format!(
                    "generator `{}` must have positive degree",
                    g.name
                )));
            }
            if g.nilpotency == Some(0) {
                return Err(Error::InvalidArgument(format!(
                    "generator `{}` has nilpotency bound 0",
                    g.name
                )));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate generator `{}`",
                    g.name
                )));
            }
        }
        Ok(Arc::new(Self {
            generators,
            truncation,
        }))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn degree_of(&self, exps: &[u32]) -> u32 {
        exps.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    fn violates_nilpotency(&self, exps: &[u32]) -> bool {
        exps.iter()
            .zip(&self.generators)
            .any(|(&e, g)| g.nilpotency.is_some_and(|m| e >= m))
    }

    /// A copy of this ring with one more generator appended.
    pub fn extended(&self, extra: Generator) -> Result<Arc<Self>> {
        let mut gens = self.generators.clone();
        gens.push(extra);
        Self::new(gens, self.truncation)
    }

    /// Every nonzero monomial of degree exactly `d` in the quotient, in
    /// canonical order. Empty when `d > D`.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        fn rec(ring: &RingSpec, idx: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if idx == ring.generators.len() {
                if left == 0 {
                    out.push(Monomial::from_parts(exps.clone(), ring));
                }
                return;
            }
            let g = &ring.generators[idx];
            let mut max = left / g.degree;
            if let Some(m) = g.nilpotency {
                max = max.min(m - 1);
            }
            for e in 0..=max {
                exps.push(e);
                rec(ring, idx + 1, left - e * g.degree, exps, out);
                exps.pop();
            }
        }
        if d > self.truncation {
            return Vec::new();
        }
        let mut out = Vec::new();
        rec(self, 0, d, &mut Vec::with_capacity(self.len()), &mut out);
        out.sort();
        out
    }
}

/// A monomial as a dense exponent vector together with its degree.
///
/// Ordering is the canonical graded-lex order: lower degree first, then
/// larger exponents of earlier generators first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    fn from_parts(exps: Vec<u32>, ring: &RingSpec) -> Self {
        Self {
            degree: ring.degree_of(&exps),
            exps,
        }
    }

    pub fn unit(ring: &RingSpec) -> Self {
        Self {
            degree: 0,
            exps: vec![0; ring.len()],
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of a [`RingSpec`] quotient ring: the set of monomials with
/// coefficient one.
#[derive(Clone)]
pub struct GradedPolynomial {
    ring: Arc<RingSpec>,
    terms: BTreeSet<Monomial>,
    truncated: bool,
}

impl PartialEq for GradedPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
    }
}

impl Eq for GradedPolynomial {}

impl fmt::Debug for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if self.truncated {
            f.write_str(" [truncated]")?;
        }
        Ok(())
    }
}

impl GradedPolynomial {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Self {
            ring: Arc::clone(ring),
            terms: BTreeSet::new(),
            truncated: false,
        }
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        let mut p = Self::zero(ring);
        p.terms.insert(Monomial::unit(ring));
        p
    }

    pub fn generator(ring: &Arc<RingSpec>, index: usize) -> Self {
        let mut exps = vec![0; ring.len()];
        exps[index] = 1;
        Self::from_exponents(ring, exps)
    }

    /// The class of a single monomial, reduced in the quotient.
    pub fn from_exponents(ring: &Arc<RingSpec>, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), ring.len(), "exponent vector has wrong length");
        let mut p = Self::zero(ring);
        p.toggle(exps);
        p
    }

    pub fn from_monomial(ring: &Arc<RingSpec>, m: &Monomial) -> Self {
        Self::from_exponents(ring, m.exps.clone())
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// True if some monomial was dropped because its degree exceeded the
    /// ring's truncation degree at any point in this value's history.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn with_truncation_flag(mut self, flag: bool) -> Self {
        self.truncated |= flag;
        self
    }

    /// `Some(d)` when all monomials have degree `d`; `None` for zero or
    /// inhomogeneous elements.
    pub fn degree(&self) -> Option<u32> {
        let first = self.terms.first()?.degree;
        (self.terms.last()?.degree == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// Largest degree present.
    pub fn top_degree(&self) -> Option<u32> {
        self.terms.last().map(|m| m.degree)
    }

    /// The homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> Self {
        Self {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().filter(|m| m.degree == d).cloned().collect(),
            truncated: self.truncated,
        }
    }

    fn toggle(&mut self, exps: Vec<u32>) {
        if self.ring.violates_nilpotency(&exps) {
            return;
        }
        let m = Monomial::from_parts(exps, &self.ring);
        if m.degree > self.ring.truncation {
            self.truncated = true;
            return;
        }
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for m in &other.terms {
            if !out.terms.remove(m) {
                out.terms.insert(m.clone());
            }
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        *self = self.add(other)?;
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        out.truncated = self.truncated || other.truncated;
        for a in &self.terms {
            for b in &other.terms {
                let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                out.toggle(exps);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ring).with_truncation_flag(self.truncated);
        for _ in 0..e {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Multiplies by a single monomial given as exponents.
    pub fn shift(&self, exps: &[u32]) -> Self {
        let mut out = Self::zero(&self.ring);
        out.truncated = self.truncated;
        for m in &self.terms {
            out.toggle(m.exps.iter().zip(exps).map(|(x, y)| x + y).collect());
        }
        out
    }

    /// The total Steenrod square: the ring endomorphism with
    /// `Sq(g) = g + g²` on every generator.
    pub fn total_sq(&self) -> Result<Self> {
        self.sq_filtered(None)
    }

    /// `Sq^k` of a homogeneous element: the degree `d + k` component of the
    /// total square.
    pub fn sq(&self, k: u32) -> Result<Self> {
        if !self.is_homogeneous() {
            return Err(Error::Inhomogeneous(self.to_string()));
        }
        self.sq_filtered(Some(k))
    }

    fn sq_filtered(&self, added: Option<u32>) -> Result<Self> {
        let mut out = Self::zero(&self.ring);
        out.truncated = self.truncated;
        for m in &self.terms {
            for (g, &e) in self.ring.generators.iter().zip(&m.exps) {
                if e > 0 && !g.squares {
                    return Err(Error::UnsupportedGenerator(g.name.clone()));
                }
            }
            // Sq(g^e) = g^e (1 + g)^e = Σ_j C(e, j) g^{e+j}.
            let mut exps = m.exps.clone();
            self.sq_rec(&m.exps, 0, added, &mut exps, &mut out);
        }
        Ok(out)
    }

    fn sq_rec(&self, base: &[u32], idx: usize, left: Option<u32>, exps: &mut Vec<u32>, out: &mut Self) {
        if idx == base.len() {
            if left.unwrap_or(0) == 0 {
                out.toggle(exps.clone());
            }
            return;
        }
        let e = base[idx];
        let deg = self.ring.generators[idx].degree;
        for j in 0..=e {
            if !binom_mod2(u64::from(e), i64::from(j)) {
                continue;
            }
            let step = j * deg;
            let rest = match left {
                Some(l) if step > l => break,
                Some(l) => Some(l - step),
                None => None,
            };
            exps[idx] = e + j;
            self.sq_rec(base, idx + 1, rest, exps, out);
        }
        exps[idx] = e;
    }

    /// Applies a ring homomorphism given by generator images.
    pub fn substitute(&self, images: &[GradedPolynomial], target: &Arc<RingSpec>) -> Result<Self> {
        if images.len() != self.ring.len() {
            return Err(Error::DimensionMismatch {
                expected: self.ring.len(),
                actual: images.len(),
            });
        }
        let mut out = Self::zero(target);
        out.truncated = self.truncated;
        for m in &self.terms {
            let mut term = Self::one(target);
            for (img, &e) in images.iter().zip(&m.exps) {
                if e > 0 {
                    term = term.multiply(&img.pow(e)?)?;
                }
            }
            out.add_assign(&term)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(names: &[(&str, u32)], d: u32) -> Arc<RingSpec> {
        RingSpec::new(names.iter().map(|&(n, deg)| Generator::new(n, deg)).collect(), d).unwrap()
    }

    fn p(ring: &Arc<RingSpec>, s: &str) -> GradedPolynomial {
        GradedPolynomial::parse(ring, s).unwrap()
    }

    #[test]
    fn square_of_generator() {
        let r = free(&[("t", 1)], 10);
        assert_eq!(p(&r, "t").multiply(&p(&r, "t")).unwrap(), p(&r, "t^2"));
    }

    #[test]
    fn sphere_class_squares_to_zero() {
        let r = RingSpec::new(vec![Generator::new("s1", 1).nilpotent(2)], 10).unwrap();
        assert!(p(&r, "s1").multiply(&p(&r, "s1")).unwrap().is_zero());
    }

    #[test]
    fn cross_terms_cancel() {
        let r = free(&[("t", 1), ("u", 1)], 10);
        let a = p(&r, "t*u + t^2");
        assert_eq!(a.multiply(&a).unwrap(), p(&r, "t^2*u^2 + t^4"));
    }

    #[test]
    fn total_sq_examples() {
        let r = free(&[("v", 2)], 10);
        assert_eq!(p(&r, "v").total_sq().unwrap(), p(&r, "v + v^2"));
        assert_eq!(p(&r, "1").total_sq().unwrap(), p(&r, "1"));
        let r = free(&[("t", 1), ("u", 1)], 10);
        assert_eq!(
            p(&r, "t*u").total_sq().unwrap(),
            p(&r, "t*u + t*u^2 + t^2*u + t^2*u^2")
        );
    }

    #[test]
    fn sq_k_examples() {
        let r = free(&[("t1", 1), ("t2", 1)], 10);
        let x = p(&r, "t1*t2");
        assert_eq!(x.sq(1).unwrap(), p(&r, "t1^2*t2 + t1*t2^2"));
        assert_eq!(x.sq(0).unwrap(), x);
        let r = free(&[("v", 2)], 10);
        assert!(p(&r, "v").sq(1).unwrap().is_zero());
    }

    #[test]
    fn sq_rejects_inhomogeneous() {
        let r = free(&[("t", 1)], 10);
        assert!(matches!(p(&r, "t + t^2").sq(1), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn unsupported_generator() {
        let r = RingSpec::new(vec![Generator::new("w", 4).without_square_rule()], 10).unwrap();
        assert!(matches!(
            p(&r, "w").total_sq(),
            Err(Error::UnsupportedGenerator(name)) if name == "w"
        ));
        assert_eq!(p(&r, "1").total_sq().unwrap(), p(&r, "1"));
    }

    #[test]
    fn ring_mismatch() {
        let a = free(&[("t", 1)], 10);
        let b = free(&[("s", 1)], 10);
        assert_eq!(p(&a, "t").multiply(&p(&b, "s")), Err(Error::RingMismatch));
    }

    #[test]
    fn truncation_sets_flag() {
        let r = free(&[("t", 1)], 3);
        let x = p(&r, "t^2");
        let sq = x.multiply(&x).unwrap();
        assert!(sq.is_zero());
        assert!(sq.truncated());
        assert!(!x.sq(1).unwrap().truncated());
        assert!(x.sq(2).unwrap().truncated());
    }

    #[test]
    fn monomials_respect_bounds() {
        let r = RingSpec::new(
            vec![Generator::new("a", 2).nilpotent(2), Generator::new("b", 2)],
            8,
        )
        .unwrap();
        let names: Vec<String> = r
            .monomials_of_degree(4)
            .iter()
            .map(|m| GradedPolynomial::from_monomial(&r, m).to_string())
            .collect();
        assert_eq!(names, vec!["a*b", "b^2"]);
        assert!(r.monomials_of_degree(9).is_empty());
    }

    #[test]
    fn rejects_duplicate_names() {
        assert!(RingSpec::new(vec![Generator::new("t", 1), Generator::new("t", 2)], 4).is_err());
    }
}
