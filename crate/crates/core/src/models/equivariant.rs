use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polyring::{GradedPolynomial, RingSpec};

/// An element of `H^*(X^τ) ⊗ F₂[u]`, stored as a polynomial in a ring whose
/// last generator is `u`.
#[derive(Clone, PartialEq, Eq)]
pub struct EquivariantClass {
    poly: GradedPolynomial,
    base: Arc<RingSpec>,
}

impl EquivariantClass {
    pub fn new(poly: GradedPolynomial, base: &Arc<RingSpec>) -> Result<Self> {
        let ring = poly.ring();
        if ring.len() != base.len() + 1
            || ring.generators()[..base.len()] != *base.generators()
            || ring.generators()[base.len()].name != "u"
        {
            return Err(Error::RingMismatch);
        }
        Ok(Self {
            poly,
            base: Arc::clone(base),
        })
    }

    pub fn poly(&self) -> &GradedPolynomial {
        &self.poly
    }

    pub fn into_poly(self) -> GradedPolynomial {
        self.poly
    }

    pub fn base(&self) -> &Arc<RingSpec> {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn truncated(&self) -> bool {
        self.poly.truncated()
    }

    fn u_index(&self) -> usize {
        self.base.len()
    }

    /// Highest power of `u` present.
    pub fn u_degree(&self) -> Option<u32> {
        let ui = self.u_index();
        self.poly.terms().map(|m| m.exponents()[ui]).max()
    }

    /// The coefficient of `u^j`, as an element of `H^*(X^τ)`.
    pub fn coeff(&self, j: u32) -> GradedPolynomial {
        let ui = self.u_index();
        let mut out = GradedPolynomial::zero(&self.base).with_truncation_flag(self.poly.truncated());
        for m in self.poly.terms() {
            if m.exponents()[ui] == j {
                let exps = m.exponents()[..ui].to_vec();
                out = out
                    .add(&GradedPolynomial::from_exponents(&self.base, exps))
                    .expect("same base ring");
            }
        }
        out
    }

    /// The part of the class with `u`-exponent strictly above `j`.
    pub fn above(&self, j: u32) -> GradedPolynomial {
        let ui = self.u_index();
        let mut out = GradedPolynomial::zero(self.poly.ring());
        for m in self.poly.terms() {
            if m.exponents()[ui] > j {
                out = out
                    .add(&GradedPolynomial::from_monomial(self.poly.ring(), m))
                    .expect("same ring");
            }
        }
        out
    }
}

impl fmt::Display for EquivariantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for EquivariantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.poly)
    }
}
