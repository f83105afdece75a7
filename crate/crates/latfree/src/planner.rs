//! Exact evaluation of the existence condition for wide lattice-free
//! simplices, and the prime/width schedule it induces.
//!
//! For dimension d, prime p and width target k, the counting argument
//! concludes existence as soon as
//!
//! ```text
//! 2(d+1)(k+1)^d p^(d-2)  +  (p+d)^d / d!  <  p^(d-1)          (the condition)
//! ```
//!
//! Each side is compared after clearing denominators, so everything is an
//! integer inequality in arbitrary precision; there is no floating point in
//! this module. The sufficient split pins each summand under half of the
//! right side; the planner picks p near 49/100 · d! and the largest k the
//! split admits, targeting widths of β·d with β < 1/e.
//!
//! The planner certifies existence only. It never constructs a lattice at
//! these sizes: the freeness check alone is Θ(p·d) with p ~ d!/2.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Bases for strong probable-prime testing: the first 13 primes. This set is
/// a deterministic primality test below [`deterministic_limit`].
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Extra bases used above the deterministic range, where the result is
/// flagged as probable.
const MR_EXTRA_BASES: [u64; 7] = [43, 47, 53, 59, 61, 67, 71];

/// Largest n for which the 13-base strong test is known exact:
/// 3,317,044,064,679,887,385,961,981.
pub fn deterministic_limit() -> BigUint {
    "3317044064679887385961981".parse().expect("constant")
}

/// Strong probable-prime test with the fixed base set; deterministic below
/// [`deterministic_limit`].
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in MR_BASES.iter().chain(&MR_EXTRA_BASES) {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    // n is odd and > 71 here. Write n - 1 = 2^s · t with t odd.
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n - 1 > 0");
    let t = &n_minus_1 >> s;

    let bases: Vec<u64> = if *n <= deterministic_limit() {
        MR_BASES.to_vec()
    } else {
        // Still a fixed base list; callers flag the result as probable in
        // this range.
        MR_BASES.iter().chain(&MR_EXTRA_BASES).copied().collect()
    };
    'witness: for &b in &bases {
        let mut x = BigUint::from(b).modpow(&t, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeResult {
    #[serde(with = "crate::numstr::biguint_string")]
    pub prime: BigUint,
    /// Distance from the requested starting point.
    #[serde(with = "crate::numstr::biguint_string")]
    pub gap: BigUint,
    /// True when the prime lies beyond the deterministic range of the test.
    pub probable: bool,
}

/// Smallest prime >= n (upward search; deterministic).
pub fn nearest_prime(n: &BigUint) -> PrimeResult {
    let two = BigUint::from(2u32);
    let mut candidate = if *n <= two { two.clone() } else { n.clone() };
    if candidate > two && (&candidate % 2u32).is_zero() {
        candidate += 1u32;
    }
    loop {
        if is_prime(&candidate) {
            return PrimeResult {
                gap: &candidate - n.min(&candidate),
                probable: candidate > deterministic_limit(),
                prime: candidate,
            };
        }
        candidate += 2u32;
    }
}

/// Largest r with r^d <= n, by binary search with exact powering.
pub fn integer_dth_root(n: &BigUint, d: u32) -> BigUint {
    assert!(d >= 1);
    if n.is_zero() || n.is_one() || d == 1 {
        return n.clone();
    }
    let bits = n.bits();
    let mut lo = BigUint::one();
    let mut hi = BigUint::one() << (bits / d as u64 + 1);
    // invariant: lo^d <= n < hi^d
    while &lo + 1u32 < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if mid.pow(d) <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Default prime target ratio p ≈ (49/100)·d!; any ratio below 1/2 leaves
/// room for the volume term, and larger ratios admit larger k.
pub const DEFAULT_ALPHA: (u64, u64) = (49, 100);

/// Exact evaluation of the existence condition and its sufficient split at
/// one (d, p, k).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsReport {
    pub d: u32,
    pub k: u64,
    #[serde(with = "crate::numstr::biguint_string")]
    pub p: BigUint,
    /// 2(d+1)(k+1)^d p^(d-2)
    #[serde(with = "crate::numstr::biguint_string")]
    pub lhs_term_g: BigUint,
    /// Numerator (p+d)^d of the volume term, kept over d! to avoid division.
    #[serde(with = "crate::numstr::biguint_string")]
    pub lhs_term_f_num: BigUint,
    #[serde(with = "crate::numstr::biguint_string")]
    pub lhs_term_f_den: BigUint,
    /// p^(d-1)
    #[serde(with = "crate::numstr::biguint_string")]
    pub rhs: BigUint,
    pub cond14: bool,
    pub cond15: bool,
    pub cond16: bool,
    pub alpha_num: u64,
    pub alpha_den: u64,
}

/// Evaluate the existence condition at (d, p, k) with exact integer
/// comparisons (all fractions cleared by multiplying through by d! and 2).
pub fn eval_condition(d: u32, p: &BigUint, k: u64) -> Result<BoundsReport> {
    if d < 3 {
        return Err(Error::InvalidInput("condition evaluation needs d >= 3".into()));
    }
    if k < 1 {
        return Err(Error::InvalidInput("width target k must be at least 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }

    let dfact = factorial(d);
    let kp1 = BigUint::from(k + 1);
    let term_g = 2u32 * BigUint::from(d + 1) * kp1.pow(d) * p.pow(d - 2);
    let term_f_num = (p + BigUint::from(d)).pow(d);
    let rhs = p.pow(d - 1);

    // The g-term under half the right side: compared as 2·term_g < rhs; also
    // equivalent to 4(d+1)(k+1)^d < p after dividing by p^(d-2). Both routes
    // must agree.
    let cond15 = &term_g * 2u32 < rhs;
    let cond15_reduced = 4u32 * BigUint::from(d + 1) * kp1.pow(d) < *p;
    assert_eq!(cond15, cond15_reduced, "the two forms of the g-half must agree");

    // The volume term under half the right side: 2(p+d)^d < d!·rhs.
    let cond16 = &term_f_num * 2u32 < &dfact * &rhs;

    // Full condition: term_g + (p+d)^d/d! < rhs, cleared by d!.
    let cond14 = &term_g * &dfact + &term_f_num < &dfact * &rhs;

    // The split is sufficient: each summand below half the right side.
    assert!(
        !(cond15 && cond16) || cond14,
        "the two halves must imply the full condition"
    );

    Ok(BoundsReport {
        d,
        k,
        p: p.clone(),
        lhs_term_g: term_g,
        lhs_term_f_num: term_f_num,
        lhs_term_f_den: dfact,
        rhs,
        cond14,
        cond15,
        cond16,
        alpha_num: DEFAULT_ALPHA.0,
        alpha_den: DEFAULT_ALPHA.1,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanReport {
    pub d: u32,
    pub beta_num: u64,
    pub beta_den: u64,
    pub alpha_num: u64,
    pub alpha_den: u64,
    #[serde(with = "crate::numstr::biguint_string")]
    pub p: BigUint,
    /// Distance from ⌊α·d!⌋ to the selected prime.
    #[serde(with = "crate::numstr::biguint_string")]
    pub prime_gap: BigUint,
    pub prime_probable: bool,
    /// Certified width floor, when any k >= 1 satisfies the condition.
    pub k: Option<u64>,
    /// ⌊β·d⌋, the width the asymptotic schedule asks for.
    pub target_k: u64,
    /// k >= target_k with the condition verified.
    pub achieved: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bounds: Option<BoundsReport>,
    pub note: String,
}

/// Select a prime near α·d! and the largest certifiable width target for
/// dimension d; report whether it reaches ⌊β·d⌋.
pub fn plan(d: u32, beta: (u64, u64)) -> Result<PlanReport> {
    plan_with_alpha(d, beta, DEFAULT_ALPHA)
}

pub fn plan_with_alpha(d: u32, beta: (u64, u64), alpha: (u64, u64)) -> Result<PlanReport> {
    if d < 3 {
        return Err(Error::InvalidInput("planning needs d >= 3".into()));
    }
    let (bn, bd) = beta;
    if bd == 0 || bn == 0 || bn >= bd {
        return Err(Error::InvalidInput("beta must satisfy 0 < beta < 1".into()));
    }
    let (an, ad) = alpha;
    if ad == 0 || an == 0 {
        return Err(Error::InvalidInput("alpha must be positive".into()));
    }

    let target = factorial(d) * an / ad;
    let found = nearest_prime(&target);
    let p = found.prime.clone();

    // The g-half rearranged: k + 1 < [p / (4(d+1))]^(1/d).
    let cap = &p / (4u32 * BigUint::from(d + 1));
    let root = integer_dth_root(&cap, d);
    let k_max = root.to_u64().and_then(|r| r.checked_sub(1));

    let mut chosen: Option<(u64, BoundsReport)> = None;
    if let Some(k_max) = k_max {
        // The condition's left side grows with k, so scan downward; the
        // first k that satisfies it is the largest.
        let mut k = k_max;
        while k >= 1 {
            let report = eval_condition(d, &p, k)?;
            if report.cond14 {
                chosen = Some((k, report));
                break;
            }
            k -= 1;
        }
    }

    let target_k = ((bn as u128 * d as u128) / bd as u128) as u64;
    let (k, bounds) = match chosen {
        Some((k, b)) => (Some(k), Some(b)),
        None => (None, None),
    };
    Ok(PlanReport {
        d,
        beta_num: bn,
        beta_den: bd,
        alpha_num: an,
        alpha_den: ad,
        p,
        prime_gap: found.gap,
        prime_probable: found.probable,
        k,
        target_k,
        achieved: k.is_some_and(|k| k >= target_k),
        bounds,
        note: "existence certified by counting only; no lattice is constructed at this scale"
            .into(),
    })
}
