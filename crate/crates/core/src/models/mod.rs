//! Concrete spaces with involution: the ring data, `κ`, the composite
//! `r_G ∘ σ` on generators, and the derived maps `p` and `r`.
//!
//! `H_G^*(X)` is never stored. A model records where `r_G ∘ σ` sends each
//! generator of `H^*(X)`, and extends multiplicatively. The projection `p`
//! onto ordinary cohomology is evaluation at `u = 0`.

mod equivariant;
mod sections;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{Generator, GradedPolynomial, RingSpec};

pub use equivariant::EquivariantClass;
pub use sections::{SectionCandidate, SectionFamily};

/// The serialized description of a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    /// `(CP^∞)^n` with complex conjugation, truncated at degree `truncation`.
    Projective { n: u32, truncation: u32 },
    /// A product of spheres `S^{d}` with involutions fixing `S^{f}`, one
    /// `[d, f]` pair per factor.
    Spheres { factors: Vec<[u32; 2]> },
}

impl ModelSpec {
    /// `S² × S⁴` with the identity on `S²` and fixed set `S¹ ⊂ S⁴`.
    pub fn sphere_tau() -> Self {
        Self::Spheres {
            factors: vec![[2, 2], [4, 1]],
        }
    }

    /// `S² × S⁴` with fixed sets `S¹ ⊂ S²` and `S² ⊂ S⁴`.
    pub fn sphere_tau_tilde() -> Self {
        Self::Spheres {
            factors: vec![[2, 1], [4, 2]],
        }
    }

    /// Parses `d,f;d,f;…`.
    pub fn parse_sphere_factors(text: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for pair in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (d, f) = pair
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected `d,f`, got `{pair}`")))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad number in `{pair}`")))
            };
            factors.push([num(d)?, num(f)?]);
        }
        if factors.is_empty() {
            return Err(Error::Parse("empty sphere factor list".into()));
        }
        Ok(Self::Spheres { factors })
    }

    /// Builtin names: `projective:N[:D]`, `tau`, `tau-tilde`, `spheres:d,f;d,f`.
    pub fn builtin(name: &str) -> Option<Result<Self>> {
        let name = name.trim();
        match name {
            "tau" => return Some(Ok(Self::sphere_tau())),
            "tau-tilde" => return Some(Ok(Self::sphere_tau_tilde())),
            _ => {}
        }
        if let Some(rest) = name.strip_prefix("projective:") {
            let mut parts = rest.split(':');
            let n = parts.next().and_then(|s| s.parse::<u32>().ok());
            let d = parts.next().map(|s| s.parse::<u32>().ok());
            return Some(match (n, d, parts.next()) {
                (Some(n), None, None) => Ok(Self::Projective { n, truncation: 0 }),
                (Some(n), Some(Some(d)), None) => Ok(Self::Projective { n, truncation: d }),
                _ => Err(Error::Parse(format!("bad builtin model `{name}`"))),
            });
        }
        name.strip_prefix("spheres:").map(Self::parse_sphere_factors)
    }
}

#[derive(Debug, Clone)]
pub struct ConjugationModel {
    spec: ModelSpec,
    xring: Arc<RingSpec>,
    fring: Arc<RingSpec>,
    eqring: Arc<RingSpec>,
    kappa: Option<Vec<GradedPolynomial>>,
    rgsigma: Vec<GradedPolynomial>,
    claims_conjugation: bool,
}

fn unique_names(prefix: &str, dims: &[u32]) -> Vec<String> {
    dims.iter()
        .enumerate()
        .map(|(i, d)| {
            if dims.iter().filter(|&&e| e == *d).count() > 1 {
                format!("{prefix}{d}_{}", i + 1)
            } else {
                format!("{prefix}{d}")
            }
        })
        .collect()
}

impl ConjugationModel {
    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        match spec {
            ModelSpec::Projective { n, truncation } => Self::projective(*n, *truncation),
            ModelSpec::Spheres { factors } => {
                let pairs: Vec<(u32, u32)> = factors.iter().map(|&[d, f]| (d, f)).collect();
                Self::sphere_product(&pairs)
            }
        }
    }

    /// `X = (CP^∞)^n`, `X^τ = (RP^∞)^n`, `κ(v_i) = t_i`,
    /// `r_G σ(v_i) = t_i u + t_i²`.
    pub fn projective(n: u32, truncation: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("projective model needs n >= 1".into()));
        }
        if truncation < 2 {
            return Err(Error::InvalidArgument(format!(
                "projective model needs truncation >= 2, got {truncation}"
            )));
        }
        let xring = RingSpec::new(
            (1..=n).map(|i| Generator::new(format!("v{i}"), 2)).collect(),
            truncation,
        )?;
        let fring = RingSpec::new(
            (1..=n).map(|i| Generator::new(format!("t{i}"), 1)).collect(),
            truncation,
        )?;
        let eqring = fring.extended(Generator::new("u", 1))?;
        let u = GradedPolynomial::generator(&eqring, n as usize);
        let mut kappa = Vec::new();
        let mut rgsigma = Vec::new();
        for i in 0..n as usize {
            kappa.push(GradedPolynomial::generator(&fring, i));
            let t = GradedPolynomial::generator(&eqring, i);
            rgsigma.push(t.multiply(&u)?.add(&t.multiply(&t)?)?);
        }
        Ok(Self {
            spec: ModelSpec::Projective { n, truncation },
            xring,
            fring,
            eqring,
            kappa: Some(kappa),
            rgsigma,
            claims_conjugation: true,
        })
    }

    /// A product of spheres `S^{d_i}` whose involutions fix `S^{f_i}`, with
    /// `r_G(s_{d_i} ⊗ 1) = s_{f_i} u^{d_i - f_i}`.
    pub fn sphere_product(factors: &[(u32, u32)]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("need at least one sphere factor".into()));
        }
        for &(d, f) in factors {
            if f == 0 || f > d {
                return Err(Error::InvalidFixedDim { dim: d, fixed: f });
            }
        }
        let total: u32 = factors.iter().map(|&(d, _)| d).sum();
        let truncation = 2 * total;
        let dims: Vec<u32> = factors.iter().map(|&(d, _)| d).collect();
        let fixed: Vec<u32> = factors.iter().map(|&(_, f)| f).collect();
        let xnames = unique_names("s", &dims);
        let fnames = unique_names("s", &fixed);
        let xring = RingSpec::new(
            xnames.iter().zip(&dims).map(|(n, &d)| Generator::new(n.clone(), d).nilpotent(2)).collect(),
            truncation,
        )?;
        let fring = RingSpec::new(
            fnames.iter().zip(&fixed).map(|(n, &f)| Generator::new(n.clone(), f).nilpotent(2)).collect(),
            truncation,
        )?;
        let eqring = fring.extended(Generator::new("u", 1))?;
        let u_index = factors.len();

        let rgsigma = factors
            .iter()
            .enumerate()
            .map(|(i, &(d, f))| {
                let mut exps = vec![0; factors.len() + 1];
                exps[i] = 1;
                exps[u_index] = d - f;
                GradedPolynomial::from_exponents(&eqring, exps)
            })
            .collect();

        let claims_conjugation = factors.iter().all(|&(d, f)| d == 2 * f);
        let kappa = if claims_conjugation {
            Some((0..factors.len()).map(|i| GradedPolynomial::generator(&fring, i)).collect())
        } else {
            // Any degree-halving matching of generators, if one exists.
            let mut used = vec![false; fixed.len()];
            let mut images = Some(Vec::new());
            for &d in &dims {
                let hit = (d % 2 == 0)
                    .then(|| (0..fixed.len()).find(|&j| !used[j] && 2 * fixed[j] == d))
                    .flatten();
                match (hit, images.as_mut()) {
                    (Some(j), Some(v)) => {
                        used[j] = true;
                        v.push(GradedPolynomial::generator(&fring, j));
                    }
                    _ => images = None,
                }
            }
            images
        };

        Ok(Self {
            spec: ModelSpec::Spheres {
                factors: factors.iter().map(|&(d, f)| [d, f]).collect(),
            },
            xring,
            fring,
            eqring,
            kappa,
            rgsigma,
            claims_conjugation,
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn xring(&self) -> &Arc<RingSpec> {
        &self.xring
    }

    pub fn fring(&self) -> &Arc<RingSpec> {
        &self.fring
    }

    pub fn eqring(&self) -> &Arc<RingSpec> {
        &self.eqring
    }

    pub fn claims_conjugation(&self) -> bool {
        self.claims_conjugation
    }

    pub fn has_kappa(&self) -> bool {
        self.kappa.is_some()
    }

    pub fn truncation(&self) -> u32 {
        self.xring.truncation()
    }

    /// `u` as an element of the equivariant ring.
    pub fn u(&self) -> GradedPolynomial {
        GradedPolynomial::generator(&self.eqring, self.fring.len())
    }

    pub fn label(&self) -> String {
        match &self.spec {
            ModelSpec::Projective { n, truncation } => {
                format!("projective(n={n}, D={truncation})")
            }
            ModelSpec::Spheres { factors } => {
                let parts: Vec<String> = factors.iter().map(|[d, f]| format!("S^{d}>S^{f}")).collect();
                format!("spheres[{}]", parts.join(" x "))
            }
        }
    }

    pub fn parse_class(&self, text: &str) -> Result<GradedPolynomial> {
        GradedPolynomial::parse(&self.xring, text)
    }

    fn check_xring(&self, x: &GradedPolynomial) -> Result<()> {
        if **x.ring() == *self.xring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// `κ`, extended multiplicatively; applied termwise to inhomogeneous
    /// classes.
    pub fn kappa(&self, x: &GradedPolynomial) -> Result<GradedPolynomial> {
        self.check_xring(x)?;
        let images = self.kappa.as_ref().ok_or(Error::NoKappa)?;
        x.substitute(images, &self.fring)
    }

    /// `r_G(σ(x))`, extended multiplicatively from the generators.
    pub fn rg_sigma(&self, x: &GradedPolynomial) -> Result<EquivariantClass> {
        self.check_xring(x)?;
        EquivariantClass::new(x.substitute(&self.rgsigma, &self.eqring)?, &self.fring)
    }

    /// Includes a class of `H^*(X^τ)` into `H^*(X^τ) ⊗ F₂[u]`.
    pub fn lift(&self, z: &GradedPolynomial) -> Result<GradedPolynomial> {
        let images: Vec<GradedPolynomial> = (0..self.fring.len())
            .map(|i| GradedPolynomial::generator(&self.eqring, i))
            .collect();
        z.substitute(&images, &self.eqring)
    }

    /// `Σ_{i=0}^{n} Sq^i(z) u^{n-i}`.
    pub fn homogenised_total_sq(&self, z: &GradedPolynomial, n: u32) -> Result<EquivariantClass> {
        if !z.is_homogeneous() || z.degree().is_some_and(|d| d != n) {
            return Err(Error::Inhomogeneous(format!("{z} (expected degree {n})")));
        }
        let lifted = self.lift(z)?;
        let u_index = self.fring.len();
        let mut out = GradedPolynomial::zero(&self.eqring).with_truncation_flag(lifted.truncated());
        for i in 0..=n {
            let mut shift = vec![0; self.eqring.len()];
            shift[u_index] = n - i;
            out.add_assign(&lifted.sq(i)?.shift(&shift))?;
        }
        EquivariantClass::new(out, &self.fring)
    }

    /// `r(x) = p(r_G(σ(x)))`: the `u⁰` coefficient.
    pub fn restrict_r(&self, x: &GradedPolynomial) -> Result<GradedPolynomial> {
        Ok(self.rg_sigma(x)?.coeff(0))
    }

    /// Leading-term form of the conjugation equation for a homogeneous
    /// class of degree `2n`: `u`-degree exactly `n` with coefficient `κ(x)`.
    pub fn leading_term_holds(&self, x: &GradedPolynomial) -> Result<bool> {
        let Some(d) = x.degree() else {
            return Ok(x.is_zero());
        };
        if d % 2 != 0 {
            return Ok(false);
        }
        let img = self.rg_sigma(x)?;
        Ok(img.u_degree() == Some(d / 2) && img.coeff(d / 2) == self.kappa(x)?)
    }
}

impl fmt::Display for ConjugationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fpoly(m: &ConjugationModel, s: &str) -> GradedPolynomial {
        GradedPolynomial::parse(m.fring(), s).unwrap()
    }

    fn eq(m: &ConjugationModel, s: &str) -> GradedPolynomial {
        GradedPolynomial::parse(m.eqring(), s).unwrap()
    }

    #[test]
    fn projective_generators() {
        let m = ConjugationModel::projective(1, 8).unwrap();
        let v = m.parse_class("v1").unwrap();
        assert_eq!(*m.rg_sigma(&v).unwrap().poly(), eq(&m, "t1*u + t1^2"));
        let v2 = m.parse_class("v1^2").unwrap();
        assert_eq!(*m.rg_sigma(&v2).unwrap().poly(), eq(&m, "t1^2*u^2 + t1^4"));

        let m = ConjugationModel::projective(2, 8).unwrap();
        let x = m.parse_class("v1*v2").unwrap();
        assert_eq!(m.kappa(&x).unwrap(), fpoly(&m, "t1*t2"));
        assert_eq!(
            *m.rg_sigma(&x).unwrap().poly(),
            eq(&m, "t1*t2*u^2 + t1^2*t2*u + t1*t2^2*u + t1^2*t2^2")
        );
        let one = m.parse_class("1").unwrap();
        assert_eq!(*m.rg_sigma(&one).unwrap().poly(), eq(&m, "1"));
    }

    #[test]
    fn projective_rejects_small_truncation() {
        assert!(ConjugationModel::projective(1, 1).is_err());
        assert!(ConjugationModel::projective(0, 4).is_err());
    }

    #[test]
    fn sphere_tau_restriction() {
        let m = ConjugationModel::from_spec(&ModelSpec::sphere_tau()).unwrap();
        assert!(!m.claims_conjugation());
        let s4 = m.parse_class("s4").unwrap();
        assert_eq!(*m.rg_sigma(&s4).unwrap().poly(), eq(&m, "s1*u^3"));
        let s2 = m.parse_class("s2").unwrap();
        assert_eq!(*m.rg_sigma(&s2).unwrap().poly(), eq(&m, "s2"));
        // Degree-halving kappa still exists: s2 -> s1, s4 -> s2.
        assert_eq!(m.kappa(&s2).unwrap(), fpoly(&m, "s1"));
        assert_eq!(m.kappa(&s4).unwrap(), fpoly(&m, "s2"));
    }

    #[test]
    fn sphere_tau_tilde() {
        let m = ConjugationModel::from_spec(&ModelSpec::sphere_tau_tilde()).unwrap();
        assert!(m.claims_conjugation());
        let s4 = m.parse_class("s4").unwrap();
        assert_eq!(*m.rg_sigma(&s4).unwrap().poly(), eq(&m, "s2*u^2"));
        let x = m.parse_class("s2*s4").unwrap();
        assert_eq!(*m.rg_sigma(&x).unwrap().poly(), eq(&m, "s1*s2*u^3"));
        assert!(m.restrict_r(&s4).unwrap().is_zero());
    }

    #[test]
    fn invalid_fixed_dims() {
        assert_eq!(
            ConjugationModel::sphere_product(&[(2, 0)]).unwrap_err(),
            Error::InvalidFixedDim { dim: 2, fixed: 0 }
        );
        assert!(ConjugationModel::sphere_product(&[(2, 3)]).is_err());
        // trivial involution on a factor is allowed
        assert!(ConjugationModel::sphere_product(&[(2, 2)]).is_ok());
    }

    #[test]
    fn homogenised_square_examples() {
        let m = ConjugationModel::projective(2, 8).unwrap();
        let t = fpoly(&m, "t1");
        assert_eq!(*m.homogenised_total_sq(&t, 1).unwrap().poly(), eq(&m, "t1*u + t1^2"));
        let z = fpoly(&m, "t1*t2");
        assert_eq!(
            *m.homogenised_total_sq(&z, 2).unwrap().poly(),
            eq(&m, "t1*t2*u^2 + t1^2*t2*u + t1*t2^2*u + t1^2*t2^2")
        );
        assert!(m.homogenised_total_sq(&z, 3).is_err());

        let m = ConjugationModel::from_spec(&ModelSpec::sphere_tau()).unwrap();
        let s2 = fpoly(&m, "s2");
        assert_eq!(*m.homogenised_total_sq(&s2, 2).unwrap().poly(), eq(&m, "s2*u^2"));
    }

    #[test]
    fn restriction_examples() {
        let m = ConjugationModel::projective(1, 8).unwrap();
        assert_eq!(m.restrict_r(&m.parse_class("v1").unwrap()).unwrap(), fpoly(&m, "t1^2"));
        assert_eq!(m.restrict_r(&m.parse_class("1").unwrap()).unwrap(), fpoly(&m, "1"));
    }

    #[test]
    fn leading_terms() {
        let m = ConjugationModel::projective(2, 12).unwrap();
        for d in (0..=6).step_by(2) {
            for mono in m.xring().monomials_of_degree(d) {
                let x = GradedPolynomial::from_monomial(m.xring(), &mono);
                assert!(m.leading_term_holds(&x).unwrap(), "{x}");
            }
        }
        let m = ConjugationModel::from_spec(&ModelSpec::sphere_tau()).unwrap();
        assert!(!m.leading_term_holds(&m.parse_class("s4").unwrap()).unwrap());
    }

    #[test]
    fn spec_json_round_trip() {
        for spec in [
            ModelSpec::Projective { n: 2, truncation: 12 },
            ModelSpec::sphere_tau(),
        ] {
            let text = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<ModelSpec>(&text).unwrap(), spec);
        }
        assert_eq!(
            serde_json::to_string(&ModelSpec::sphere_tau()).unwrap(),
            r#"{"kind":"spheres","factors":[[2,2],[4,1]]}"#
        );
    }

    #[test]
    fn builtins() {
        assert_eq!(ModelSpec::builtin("tau").unwrap().unwrap(), ModelSpec::sphere_tau());
        assert_eq!(
            ModelSpec::builtin("projective:3").unwrap().unwrap(),
            ModelSpec::Projective { n: 3, truncation: 0 }
        );
        assert_eq!(
            ModelSpec::builtin("spheres:2,1;4,2").unwrap().unwrap(),
            ModelSpec::sphere_tau_tilde()
        );
        assert!(ModelSpec::builtin("projective:x").unwrap().is_err());
        assert!(ModelSpec::builtin("model.json").is_none());
    }

    #[test]
    fn duplicate_sphere_dims_get_unique_names() {
        let m = ConjugationModel::sphere_product(&[(2, 1), (2, 1)]).unwrap();
        let names: Vec<&str> = m.xring().generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["s2_1", "s2_2"]);
    }
}
