//! Canonical text form: `t1^2*t2*u^3 + t1*u`, `1` for the unit, `0` for zero.

use std::fmt;
use std::sync::Arc;

use super::{Generator, GradedPolynomial, Monomial, RingSpec};
use crate::error::{Error, Result};

impl Monomial {
    pub fn render(&self, ring: &RingSpec) -> String {
        let factors: Vec<String> = self
            .exps
            .iter()
            .zip(ring.generators())
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| {
                if e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&m.render(&self.ring))?;
        }
        Ok(())
    }
}

fn parse_monomial(ring: &RingSpec, text: &str) -> Result<Vec<u32>> {
    let mut exps = vec![0u32; ring.len()];
    let text = text.trim();
    if text == "1" {
        return Ok(exps);
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let (name, e) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: u32 = e
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        if name == "1" {
            continue;
        }
        let idx = ring
            .index_of(name)
            .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))?;
        exps[idx] += e;
    }
    Ok(exps)
}

impl GradedPolynomial {
    /// Parses a sum of monomials. Repeated monomials cancel in pairs.
    pub fn parse(ring: &Arc<RingSpec>, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = Self::zero(ring);
        if text == "0" {
            return Ok(out);
        }
        for term in text.split('+') {
            if term.trim().is_empty() {
                return Err(Error::Parse(format!("empty term in `{text}`")));
            }
            out.toggle(parse_monomial(ring, term)?);
        }
        Ok(out)
    }
}

/// Parses a ring description `name:degree[:bound],…` such as `t1:1,t2:1,u:1`
/// or `s2:2:2,s1:1:2`.
pub fn parse_ring_spec(text: &str, truncation: u32) -> Result<Arc<RingSpec>> {
    let mut gens = Vec::new();
    for entry in text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let parts: Vec<&str> = entry.split(':').map(str::trim).collect();
        let parse_num = |s: &str| {
            s.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad number `{s}` in `{entry}`")))
        };
        let g = match parts.as_slice() {
            [name, deg] => Generator::new(*name, parse_num(deg)?),
            [name, deg, bound] => Generator::new(*name, parse_num(deg)?).nilpotent(parse_num(bound)?),
            _ => return Err(Error::Parse(format!("bad generator entry `{entry}`"))),
        };
        gens.push(g);
    }
    RingSpec::new(gens, truncation)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_canonical() {
        let r = parse_ring_spec("t1:1,t2:1,u:1", 20).unwrap();
        let p = GradedPolynomial::parse(&r, "u^3*t1 + t2*t1^2 + t1*t2^2 + 1").unwrap();
        assert_eq!(p.to_string(), "1 + t1^2*t2 + t1*t2^2 + t1*u^3");
        assert_eq!(GradedPolynomial::parse(&r, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn zero_and_cancellation() {
        let r = parse_ring_spec("t:1", 10).unwrap();
        assert_eq!(GradedPolynomial::parse(&r, "0").unwrap().to_string(), "0");
        assert_eq!(GradedPolynomial::parse(&r, "t + t").unwrap().to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        let r = parse_ring_spec("t:1", 10).unwrap();
        assert!(GradedPolynomial::parse(&r, "x").is_err());
        assert!(GradedPolynomial::parse(&r, "t^a").is_err());
        assert!(GradedPolynomial::parse(&r, "t + ").is_err());
        assert!(parse_ring_spec("t", 4).is_err());
        assert!(parse_ring_spec("t:0", 4).is_err());
    }

    #[test]
    fn nilpotent_spec() {
        let r = parse_ring_spec("s2:2:2,s1:1:2", 10).unwrap();
        let p = GradedPolynomial::parse(&r, "s2^2 + s1*s2").unwrap();
        assert_eq!(p.to_string(), "s2*s1");
    }
}
