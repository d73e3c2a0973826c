//! Local-lemma lower bound for suspension cliques, evaluated exactly.
//!
//! The bound holds for `n` when
//! `e · (1 + C(t,2)·C(r,2)·C(n,t−2)) · 2^(1−C(t,2)) < 1`.
//! `e` is replaced by the upper end of a rational enclosure, so a reported
//! `n` never relies on rounding.

use num_bigint::BigUint;

use crate::error::{invalid, Result};

/// `e` lies in `[E_LOWER / E_DEN, E_UPPER / E_DEN]`.
pub const E_LOWER: u64 = 2_718_281_828_459_045;
pub const E_UPPER: u64 = 2_718_281_828_459_046;
pub const E_DEN: u64 = 1_000_000_000_000_000;

pub fn big_binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn check(t: usize, r: usize) -> Result<()> {
    if r < 3 || t < r {
        return Err(invalid(format!(
            "the suspension bound needs t >= r >= 3, got t = {t}, r = {r}"
        )));
    }
    Ok(())
}

/// Whether the inequality holds at `n` with `e` at its upper enclosure.
pub fn lll_condition(t: usize, r: usize, n: usize) -> Result<bool> {
    check(t, r)?;
    let pairs = t * (t - 1) / 2;
    let dependencies =
        BigUint::from(1u32) + big_binomial(t, 2) * big_binomial(r, 2) * big_binomial(n, t - 2);
    let lhs = BigUint::from(E_UPPER) * 2u32 * dependencies;
    let rhs = BigUint::from(E_DEN) << pairs;
    Ok(lhs < rhs)
}

/// Largest `n >= t` satisfying the inequality, or `None` if `n = t` fails.
///
/// The left side is nondecreasing in `n`, so the satisfying set is an
/// initial segment and a doubling-then-bisection search finds its end.
pub fn lll_suspension_bound(t: usize, r: usize) -> Result<Option<usize>> {
    if !lll_condition(t, r, t)? {
        return Ok(None);
    }
    let mut lo = t;
    let mut hi = t.max(1) * 2;
    while lll_condition(t, r, hi)? {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if lll_condition(t, r, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}
