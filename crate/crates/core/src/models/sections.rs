use std::sync::Arc;

use super::{ConjugationModel, EquivariantClass};
use crate::error::{Error, Result};
use crate::polyring::{Generator, GradedPolynomial, Monomial, RingSpec};

/// Past this many correction classes the `2^k` enumeration is refused.
const MAX_CORRECTIONS: usize = 16;

/// One additive section value `σ(x) = x ⊗ 1 + Σ c_j ⊗ u^{d - |c_j|}` and its
/// image under `r_G`.
#[derive(Debug, Clone)]
pub struct SectionCandidate {
    /// Which correction classes are switched on, in the family's order.
    pub corrections: Vec<bool>,
    /// `σ(x)` in `H^*(X) ⊗ F₂[u]`.
    pub section: GradedPolynomial,
    pub image: EquivariantClass,
}

impl SectionCandidate {
    pub fn is_canonical(&self) -> bool {
        self.corrections.iter().all(|&c| !c)
    }
}

/// All section candidates for one basis class.
#[derive(Debug, Clone)]
pub struct SectionFamily {
    pub class: GradedPolynomial,
    pub correction_classes: Vec<GradedPolynomial>,
    pub candidates: Vec<SectionCandidate>,
}

impl ConjugationModel {
    /// `H^*(X) ⊗ F₂[u]`, the additive model of `H_G^*(X)`.
    pub fn xring_u(&self) -> Result<Arc<RingSpec>> {
        self.xring.extended(Generator::new("u", 1))
    }

    /// `r_G` on `H^*(X) ⊗ F₂[u]`: `c ⊗ u^j ↦ r_G(c ⊗ 1) u^j`.
    pub fn rg(&self, y: &GradedPolynomial) -> Result<EquivariantClass> {
        let mut images = self.rgsigma.clone();
        images.push(self.u());
        EquivariantClass::new(y.substitute(&images, &self.eqring)?, &self.fring)
    }

    fn ensure_finite(&self) -> Result<()> {
        if self.xring.generators().iter().any(|g| g.nilpotency.is_none()) {
            return Err(Error::InfiniteEnumeration(self.label()));
        }
        Ok(())
    }

    /// For each monomial basis class of degree `d`, every additive,
    /// degree-preserving section value together with its `r_G`-image.
    pub fn enumerate_sections(&self, d: u32) -> Result<Vec<SectionFamily>> {
        self.ensure_finite()?;
        let xu = self.xring_u()?;
        let u_index = self.xring.len();
        let embed = |m: &Monomial, u_power: u32| {
            let mut exps = m.exponents().to_vec();
            exps.push(u_power);
            GradedPolynomial::from_exponents(&xu, exps)
        };

        let lower: Vec<Monomial> = (0..d).flat_map(|e| self.xring.monomials_of_degree(e)).collect();
        if lower.len() > MAX_CORRECTIONS {
            return Err(Error::InvalidArgument(format!(
                "{} correction classes below degree {d}; enumeration too large",
                lower.len()
            )));
        }
        let corrections: Vec<GradedPolynomial> = lower.iter().map(|c| embed(c, d - c.degree())).collect();

        let mut families = Vec::new();
        for class in self.xring.monomials_of_degree(d) {
            let base = embed(&class, 0);
            let mut candidates = Vec::with_capacity(1 << lower.len());
            for mask in 0u32..(1 << lower.len()) {
                let switched: Vec<bool> = (0..lower.len()).map(|j| mask & (1 << j) != 0).collect();
                let mut section = base.clone();
                for (c, _) in corrections.iter().zip(&switched).filter(|(_, &on)| on) {
                    section.add_assign(c)?;
                }
                debug_assert!(section.terms().all(|m| m.exponents().len() == u_index + 1));
                let image = self.rg(&section)?;
                candidates.push(SectionCandidate {
                    corrections: switched,
                    section,
                    image,
                });
            }
            families.push(SectionFamily {
                class: GradedPolynomial::from_monomial(&self.xring, &class),
                correction_classes: lower
                    .iter()
                    .map(|c| GradedPolynomial::from_monomial(&self.xring, c))
                    .collect(),
                candidates,
            });
        }
        Ok(families)
    }

    /// Looks for a section that is a ring map, i.e. generator values with
    /// `σ(g)^m = 0` whenever `g^m = 0`. `H_G^*(X)` is taken to be
    /// `H^*(X) ⊗ F₂[u]` as a ring. Returns the generator values found.
    pub fn find_multiplicative_section(&self) -> Result<Option<Vec<GradedPolynomial>>> {
        self.ensure_finite()?;
        let mut chosen = Vec::new();
        for (i, g) in self.xring.generators().iter().enumerate() {
            let bound = g.nilpotency.expect("finite ring");
            let families = self.enumerate_sections(g.degree)?;
            let gen = GradedPolynomial::generator(&self.xring, i);
            let family = families
                .iter()
                .find(|f| f.class == gen)
                .expect("generator is a basis class");
            let mut found = None;
            for cand in &family.candidates {
                let power = cand.section.pow(bound)?;
                if power.truncated() {
                    return Err(Error::TruncationTooSmall {
                        truncation: self.truncation(),
                        required: bound * g.degree,
                    });
                }
                if power.is_zero() {
                    found = Some(cand.section.clone());
                    break;
                }
            }
            match found {
                Some(s) => chosen.push(s),
                None => return Ok(None),
            }
        }
        Ok(Some(chosen))
    }
}
