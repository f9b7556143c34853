use crate::error::{Error, Result};

/// `C(n, k) mod 2` by Lucas' rule: one iff every binary digit of `k` is at
/// most the matching digit of `n`. Out-of-range `k` gives zero.
#[inline]
pub fn binom_mod2(n: u64, k: i64) -> bool {
    if k < 0 {
        return false;
    }
    let k = k as u64;
    k <= n && (k & n) == k
}

/// Chooses `k` with `2k <= i` such that `C(n, 2k)` and `C(n - i, 2k)` differ
/// mod 2, which is what lets the even-index coefficient equation be solved.
///
/// The first candidate is `2k` = the largest power of two dividing `i`;
/// otherwise `k = 1..=i/2` is scanned in ascending order. Every returned
/// value is re-checked before it leaves this function.
pub fn pick_k(n: u32, i: u32) -> Result<u32> {
    if i == 0 || i % 2 != 0 || i > n {
        return Err(Error::InvalidArgument(format!(
            "pick_k needs an even i with 0 < i <= n, got n={n}, i={i}"
        )));
    }
    let separates = |k: u32| {
        let two_k = 2 * i64::from(k);
        binom_mod2(u64::from(n), two_k) != binom_mod2(u64::from(n - i), two_k)
    };
    let two_adic = (i & i.wrapping_neg()) / 2;
    let k = if separates(two_adic) {
        Some(two_adic)
    } else {
        (1..=i / 2).find(|&k| separates(k))
    };
    match k {
        Some(k) => {
            assert!(2 * k <= i && separates(k));
            Ok(k)
        }
        None => Err(Error::NoSolvingK { n, i }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pascal's triangle mod 2, built by the additive recurrence only.
    fn pascal(max: usize) -> Vec<Vec<bool>> {
        let mut rows: Vec<Vec<bool>> = vec![vec![true]];
        for n in 1..=max {
            let prev = &rows[n - 1];
            let mut row = vec![false; n + 1];
            for k in 0..=n {
                let left = if k > 0 { prev[k - 1] } else { false };
                let right = if k < n { prev[k] } else { false };
                row[k] = left ^ right;
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn examples() {
        let p = pascal(8);
        assert!(!p[5][2]);
        assert!(!binom_mod2(5, 2));
        assert!(p[3][1]);
        assert!(binom_mod2(3, 1));
        assert!(binom_mod2(7, 0));
    }

    #[test]
    fn agrees_with_pascal_up_to_64() {
        let p = pascal(64);
        for n in 0..=64usize {
            for k in 0..=n {
                assert_eq!(binom_mod2(n as u64, k as i64), p[n][k], "C({n},{k})");
            }
        }
    }

    #[test]
    fn out_of_range_is_zero() {
        assert!(!binom_mod2(3, -1));
        assert!(!binom_mod2(3, 4));
        assert!(!binom_mod2(0, 2));
        assert!(binom_mod2(0, 0));
    }

    #[test]
    fn pick_k_examples() {
        assert_eq!(pick_k(4, 2).unwrap(), 1);
        assert_eq!(pick_k(6, 4).unwrap(), 2);
        assert_eq!(pick_k(2, 2).unwrap(), 1);
    }

    #[test]
    fn pick_k_rejects_bad_input() {
        assert!(pick_k(4, 3).is_err());
        assert!(pick_k(4, 0).is_err());
        assert!(pick_k(2, 4).is_err());
    }

    #[test]
    fn pick_k_always_separates() {
        for n in 1..=64u32 {
            for i in (2..=n).step_by(2) {
                let k = pick_k(n, i).unwrap();
                assert!(2 * k <= i);
                assert_ne!(
                    binom_mod2(n as u64, 2 * k as i64),
                    binom_mod2((n - i) as u64, 2 * k as i64)
                );
            }
        }
    }
}
