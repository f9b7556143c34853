use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use super::{SqMonomial, SteenrodElement};
use crate::f2core::binom_mod2;

/// `Sq^a Sq^b = Σ_c C(b-c-1, a-2c) Sq^{a+b-c} Sq^c` for `0 < a < 2b`.
fn adem(a: u32, b: u32) -> Vec<SqMonomial> {
    debug_assert!(a > 0 && a < 2 * b);
    (0..=a / 2)
        .filter(|&c| binom_mod2(u64::from(b - c - 1), i64::from(a) - 2 * i64::from(c)))
        .map(|c| SqMonomial::new([a + b - c, c]))
        .collect()
}

fn cache() -> &'static RwLock<HashMap<SqMonomial, SteenrodElement>> {
    static CACHE: OnceLock<RwLock<HashMap<SqMonomial, SteenrodElement>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn normalize_monomial(m: &SqMonomial) -> SteenrodElement {
    let Some(j) = m.first_inadmissible() else {
        return SteenrodElement::from(m.clone());
    };
    if let Some(hit) = cache().read().expect("adem cache poisoned").get(m) {
        return hit.clone();
    }
    let seq = m.entries();
    let mut out = SteenrodElement::zero();
    for replacement in adem(seq[j], seq[j + 1]) {
        let mut rewritten = seq[..j].to_vec();
        rewritten.extend_from_slice(replacement.entries());
        rewritten.extend_from_slice(&seq[j + 2..]);
        out.add_assign(&normalize_monomial(&SqMonomial::new(rewritten)));
    }
    cache()
        .write()
        .expect("adem cache poisoned")
        .insert(m.clone(), out.clone());
    out
}

/// Rewrites `e` into the admissible basis by repeatedly applying the Adem
/// relation to the leftmost inadmissible pair.
///
/// Each rewrite keeps the degree and strictly increases the sequence's
/// moment `Σ j·i_j`, which is bounded for a fixed degree, so the process
/// terminates.
pub fn adem_normalize(e: &SteenrodElement) -> SteenrodElement {
    let mut out = SteenrodElement::zero();
    for m in e.terms() {
        out.add_assign(&normalize_monomial(m));
    }
    out
}

/// All admissible monomials of degree exactly `d`, ordered by decreasing
/// excess.
pub fn admissible_basis(d: u32) -> Vec<SqMonomial> {
    fn rec(left: u32, cap: u32, seq: &mut Vec<u32>, out: &mut Vec<SqMonomial>) {
        if left == 0 {
            out.push(SqMonomial::new(seq.iter().copied()));
            return;
        }
        for i in (1..=left.min(cap)).rev() {
            seq.push(i);
            rec(left - i, i / 2, seq, out);
            seq.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_ring_spec, GradedPolynomial};

    fn el(s: &str) -> SteenrodElement {
        SteenrodElement::parse(s).unwrap()
    }

    fn brute_admissible(d: u32) -> Vec<Vec<u32>> {
        // every composition of d into positive parts, filtered
        fn comps(d: u32) -> Vec<Vec<u32>> {
            if d == 0 {
                return vec![vec![]];
            }
            (1..=d)
                .flat_map(|first| {
                    comps(d - first).into_iter().map(move |mut rest| {
                        rest.insert(0, first);
                        rest
                    })
                })
                .collect()
        }
        comps(d)
            .into_iter()
            .filter(|s| s.windows(2).all(|w| w[0] >= 2 * w[1]))
            .collect()
    }

    #[test]
    fn normalize_examples() {
        assert!(adem_normalize(&el("Sq^1 Sq^1")).is_zero());
        assert_eq!(adem_normalize(&el("Sq^2 Sq^2")), el("Sq^3 Sq^1"));
        assert_eq!(adem_normalize(&el("Sq^3")), el("Sq^3"));
        assert_eq!(adem_normalize(&el("Sq^1 Sq^2")), el("Sq^3"));
        assert_eq!(adem_normalize(&el("1")), el("1"));
    }

    #[test]
    fn normalization_agrees_with_action() {
        let ring = parse_ring_spec("t1:1,t2:1,t3:1,t4:1", 16).unwrap();
        let x = GradedPolynomial::parse(&ring, "t1*t2*t3*t4").unwrap();
        for s in ["Sq^2 Sq^2", "Sq^1 Sq^1", "Sq^1 Sq^2 Sq^1", "Sq^2 Sq^3"] {
            let e = el(s);
            assert_eq!(e.act(&x).unwrap(), adem_normalize(&e).act(&x).unwrap(), "{s}");
        }
    }

    #[test]
    fn basis_examples() {
        assert_eq!(admissible_basis(0), vec![SqMonomial::unit()]);
        let show = |d| admissible_basis(d).iter().map(|m| m.to_string()).collect::<Vec<_>>();
        assert_eq!(show(3), ["Sq^3", "Sq^2 Sq^1"]);
        assert_eq!(show(7), ["Sq^7", "Sq^6 Sq^1", "Sq^5 Sq^2", "Sq^4 Sq^2 Sq^1"]);
    }

    #[test]
    fn basis_sizes_match_enumeration() {
        let sizes: Vec<usize> = (0..=7).map(|d| admissible_basis(d).len()).collect();
        assert_eq!(sizes, [1, 1, 1, 2, 2, 2, 3, 4]);
        for d in 0..=14 {
            let mut got: Vec<Vec<u32>> = admissible_basis(d).iter().map(|m| m.entries().to_vec()).collect();
            let mut want = brute_admissible(d);
            got.sort();
            want.sort();
            assert_eq!(got, want, "degree {d}");
        }
    }

    #[test]
    fn normal_forms_are_admissible_and_idempotent() {
        for d in 1..=9u32 {
            for a in 1..d {
                let e = SteenrodElement::from(SqMonomial::new([a, d - a]));
                let n = adem_normalize(&e);
                assert!(n.is_normalized());
                assert_eq!(adem_normalize(&n), n);
                assert!(n.is_zero() || n.degree() == Some(d));
            }
        }
    }
}
