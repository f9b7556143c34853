//! The mod-2 Steenrod algebra: composites of squares, Adem normalization to
//! the admissible basis, and the action on polynomial rings.

mod adem;
mod injectivity;

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::polyring::GradedPolynomial;

pub use adem::{adem_normalize, admissible_basis};
pub use injectivity::injectivity_report;

/// A composite `Sq^{i₁} Sq^{i₂} ⋯ Sq^{i_k}`, all entries positive. The
/// empty sequence is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SqMonomial(Vec<u32>);

impl SqMonomial {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    /// Drops `Sq⁰` factors.
    pub fn new(seq: impl IntoIterator<Item = u32>) -> Self {
        Self(seq.into_iter().filter(|&i| i > 0).collect())
    }

    pub fn sq(i: u32) -> Self {
        Self::new([i])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `i₁ - i₂ - ⋯ - i_k`; for admissible sequences this is the usual excess.
    pub fn excess(&self) -> i64 {
        match self.0.split_first() {
            None => 0,
            Some((first, rest)) => {
                i64::from(*first) - rest.iter().map(|&i| i64::from(i)).sum::<i64>()
            }
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.first_inadmissible().is_none()
    }

    /// Index `j` of the leftmost pair with `i_j < 2 i_{j+1}`.
    pub(crate) fn first_inadmissible(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] < 2 * w[1])
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut seq = self.0.clone();
        seq.extend_from_slice(&other.0);
        Self(seq)
    }
}

impl Ord for SqMonomial {
    /// Degree ascending, then excess descending, then lexicographically
    /// descending.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), Reverse(self.excess()), Reverse(&self.0)).cmp(&(
            other.degree(),
            Reverse(other.excess()),
            Reverse(&other.0),
        ))
    }
}

impl PartialOrd for SqMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SqMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (j, i) in self.0.iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            write!(f, "Sq^{i}")?;
        }
        Ok(())
    }
}

/// An F₂-linear combination of [`SqMonomial`]s.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SteenrodElement {
    terms: BTreeSet<SqMonomial>,
}

impl SteenrodElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from(SqMonomial::unit())
    }

    pub fn sq(i: u32) -> Self {
        Self::from(SqMonomial::sq(i))
    }

    pub fn terms(&self) -> impl Iterator<Item = &SqMonomial> + '_ {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// `Some(d)` when every term has degree `d`.
    pub fn degree(&self) -> Option<u32> {
        let d = self.terms.first()?.degree();
        self.terms.iter().all(|m| m.degree() == d).then_some(d)
    }

    pub fn is_normalized(&self) -> bool {
        self.terms.iter().all(SqMonomial::is_admissible)
    }

    pub fn toggle(&mut self, m: SqMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    /// The product `self ∘ other` in the free algebra on the squares (no
    /// normalization).
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.compose(b));
            }
        }
        out
    }

    /// Evaluates the operation on a homogeneous class. Each composite acts
    /// right to left.
    pub fn act(&self, p: &GradedPolynomial) -> Result<GradedPolynomial> {
        if !p.is_homogeneous() {
            return Err(Error::Inhomogeneous(p.to_string()));
        }
        let mut out = GradedPolynomial::zero(p.ring()).with_truncation_flag(p.truncated());
        for m in &self.terms {
            let mut v = p.clone();
            for &i in m.0.iter().rev() {
                if v.is_zero() {
                    break;
                }
                v = v.sq(i)?;
            }
            out.add_assign(&v)?;
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty Steenrod element".into()));
        }
        let mut out = Self::zero();
        if text == "0" {
            return Ok(out);
        }
        for term in text.split('+') {
            let compact: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            if compact.is_empty() {
                return Err(Error::Parse(format!("empty term in `{text}`")));
            }
            if compact == "1" {
                out.toggle(SqMonomial::unit());
                continue;
            }
            let Some(rest) = compact.strip_prefix("Sq^") else {
                return Err(Error::Parse(format!("expected `Sq^i` in `{}`", term.trim())));
            };
            let mut seq = Vec::new();
            for piece in rest.split("Sq^") {
                let i: u32 = piece
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad square index in `{}`", term.trim())))?;
                seq.push(i);
            }
            out.toggle(SqMonomial::new(seq));
        }
        Ok(out)
    }
}

impl From<SqMonomial> for SteenrodElement {
    fn from(m: SqMonomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Self { terms }
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (j, m) in self.terms.iter().enumerate() {
            if j > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// `act` as a free function over an element and a class.
pub fn act(e: &SteenrodElement, p: &GradedPolynomial) -> Result<GradedPolynomial> {
    e.act(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_ring_spec;

    #[test]
    fn text_round_trip() {
        let e = SteenrodElement::parse("Sq^4 Sq^2 + Sq^5 Sq^1").unwrap();
        assert_eq!(e.to_string(), "Sq^5 Sq^1 + Sq^4 Sq^2");
        assert_eq!(SteenrodElement::parse(&e.to_string()).unwrap(), e);
        assert_eq!(SteenrodElement::parse("1").unwrap(), SteenrodElement::one());
        assert!(SteenrodElement::parse("0").unwrap().is_zero());
        assert_eq!(SteenrodElement::parse("Sq^2Sq^1").unwrap().to_string(), "Sq^2 Sq^1");
        assert_eq!(SteenrodElement::parse("Sq^0").unwrap(), SteenrodElement::one());
    }

    #[test]
    fn parse_errors() {
        assert!(SteenrodElement::parse("").is_err());
        assert!(SteenrodElement::parse("Sq2").is_err());
        assert!(SteenrodElement::parse("Sq^x").is_err());
        assert!(SteenrodElement::parse("Sq^1 +").is_err());
    }

    #[test]
    fn act_examples() {
        let r = parse_ring_spec("t:1", 10).unwrap();
        let t = GradedPolynomial::parse(&r, "t").unwrap();
        assert_eq!(SteenrodElement::sq(1).act(&t).unwrap().to_string(), "t^2");
        assert_eq!(SteenrodElement::one().act(&t).unwrap(), t);

        let r = parse_ring_spec("t1:1,t2:1", 10).unwrap();
        let x = GradedPolynomial::parse(&r, "t1*t2").unwrap();
        assert_eq!(SteenrodElement::sq(2).act(&x).unwrap().to_string(), "t1^2*t2^2");
    }

    #[test]
    fn unit_is_empty_composite() {
        let e = SteenrodElement::parse("Sq^3 + Sq^2 Sq^1").unwrap();
        assert_eq!(SteenrodElement::one().compose(&e), e);
        assert_eq!(e.compose(&SteenrodElement::one()), e);
    }

    #[test]
    fn excess_and_admissibility() {
        let m = SqMonomial::new([4, 2, 1]);
        assert!(m.is_admissible());
        assert_eq!(m.excess(), 1);
        assert!(!SqMonomial::new([2, 2]).is_admissible());
        assert_eq!(SqMonomial::new([1, 2]).first_inadmissible(), Some(0));
    }
}
