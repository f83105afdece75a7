//! Enumeration of width-norm balls in `Z^d`.
//!
//! The ball of radius `k` contains exactly `(k+1)^(d+1) - k^(d+1)` integer
//! vectors. The enumeration follows the structure behind that count rather
//! than filtering a box: split on `m = min(0, min_i x_i) in {-k,...,0}`. For
//! `m = 0` every entry ranges over `[0, k]`; for `m < 0` entries range over
//! `[m, m+k]` with at least one entry equal to `m`. Each vector is produced
//! exactly once and the cost is proportional to the output, so the walk
//! doubles as an executable proof of the count formula.

use crate::error::{Error, Result};
use crate::vector::IntVector;

/// `(k+1)^(d+1) - k^(d+1)`, the number of integer vectors of width norm at
/// most `k` in dimension `d`. `None` when the value overflows `u128`.
pub fn norm_ball_count(k: u64, d: usize) -> Option<u128> {
    let e = u32::try_from(d.checked_add(1)?).ok()?;
    let big = (k as u128).checked_add(1)?.checked_pow(e)?;
    let small = (k as u128).checked_pow(e)?;
    big.checked_sub(small)
}

/// Iterator over all `x` in `Z^d` with `width_norm(x) <= k`, the zero vector
/// included. Construction fails only if the exact count overflows.
pub fn norm_ball(k: u64, d: usize) -> Result<NormBall> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let count = norm_ball_count(k, d).ok_or_else(|| {
        Error::CountOverflow(format!("norm ball count (k+1)^(d+1) - k^(d+1) for k={k}, d={d}"))
    })?;
    Ok(NormBall {
        k: k as i64,
        d,
        count,
        state: None,
        done: false,
    })
}

pub struct NormBall {
    k: i64,
    d: usize,
    count: u128,
    /// `(m, digits)`; digits always form a valid member for the current `m`.
    state: Option<(i64, Vec<i64>)>,
    done: bool,
}

impl NormBall {
    /// Exact number of vectors this iterator yields.
    pub fn count_exact(&self) -> u128 {
        self.count
    }
}

impl Iterator for NormBall {
    type Item = IntVector;

    fn next(&mut self) -> Option<IntVector> {
        if self.done {
            return None;
        }
        match &mut self.state {
            None => {
                // First item: m = -k block (all entries m), or the zero
                // vector straight away when k = 0.
                let m = -self.k;
                let digits = vec![m; self.d];
                self.state = Some((m, digits));
                Some(IntVector::new(vec![m; self.d]))
            }
            Some((m, digits)) => {
                loop {
                    if step_digits(*m, self.k, digits) {
                        return Some(IntVector::new(digits.clone()));
                    }
                    // Block for this m exhausted; move to the next m.
                    *m += 1;
                    if *m > 0 {
                        self.done = true;
                        return None;
                    }
                    for x in digits.iter_mut() {
                        *x = *m;
                    }
                    return Some(IntVector::new(digits.clone()));
                }
            }
        }
    }
}

/// Advance `digits` to the next member of the `m`-block in lexicographic
/// order, maintaining the at-least-one-entry-equals-m constraint for m < 0.
/// Returns false when the block is exhausted.
fn step_digits(m: i64, k: i64, digits: &mut [i64]) -> bool {
    let d = digits.len();
    let hi = m + k;
    for j in (0..d).rev() {
        if digits[j] == hi {
            continue; // carry
        }
        // Tentatively increment position j and reset the suffix to all-m
        // (the minimal valid suffix; it re-establishes the constraint
        // whenever there is a suffix at all).
        if m < 0 && j == d - 1 && !digits[..j].iter().any(|&x| x == m) {
            // The last digit is the only place left to attain m, and
            // incrementing it moves it off m. No successor at this j.
            continue;
        }
        digits[j] += 1;
        for x in digits[j + 1..].iter_mut() {
            *x = m;
        }
        return true;
    }
    false
}

/// Visit every vector of the `m`-block whose first entry is `first`,
/// remaining entries enumerated recursively. Used to split level scans
/// across threads; the union over `(m, first)` pairs is exactly the ball.
pub(crate) fn visit_block_with_first(
    m: i64,
    k: i64,
    d: usize,
    first: i64,
    visit: &mut impl FnMut(&[i64]),
) {
    debug_assert!(d >= 1);
    let mut digits = vec![0i64; d];
    digits[0] = first;
    if d == 1 {
        if m >= 0 || first == m {
            visit(&digits);
        }
        return;
    }
    visit_rest(m, k, &mut digits, 1, m >= 0 || first == m, visit);
}

fn visit_rest(
    m: i64,
    k: i64,
    digits: &mut Vec<i64>,
    pos: usize,
    attained: bool,
    visit: &mut impl FnMut(&[i64]),
) {
    let d = digits.len();
    if pos == d {
        debug_assert!(attained);
        visit(digits);
        return;
    }
    let must_place_now = !attained && pos == d - 1;
    let lo = m;
    let hi = if must_place_now { m } else { m + k };
    let mut x = lo;
    while x <= hi {
        digits[pos] = x;
        visit_rest(m, k, digits, pos + 1, attained || x == m, visit);
        x += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::width_norm;
    use std::collections::BTreeSet;

    /// Independent oracle: scan the box [-k, k]^d and keep vectors of width
    /// norm <= k.
    fn box_oracle(k: i64, d: usize) -> BTreeSet<Vec<i64>> {
        let mut out = BTreeSet::new();
        let mut digits = vec![-k; d];
        loop {
            if width_norm(&digits) <= k {
                out.insert(digits.clone());
            }
            let mut j = d;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if digits[j] < k {
                    digits[j] += 1;
                    for x in digits[j + 1..].iter_mut() {
                        *x = -k;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn radius_zero_is_just_origin() {
        let items: Vec<_> = norm_ball(0, 3).unwrap().collect();
        assert_eq!(items, vec![IntVector::zeros(3)]);
        assert_eq!(norm_ball_count(0, 3), Some(1));
    }

    #[test]
    fn k1_d2_matches_hand_listing() {
        let got: BTreeSet<Vec<i64>> = norm_ball(1, 2).unwrap().map(|v| v.0).collect();
        let want: BTreeSet<Vec<i64>> = [
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
            vec![-1, 0],
            vec![0, -1],
            vec![-1, -1],
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
        assert_eq!(got, box_oracle(1, 2));
    }

    #[test]
    fn k3_d5_count_is_3367() {
        assert_eq!(norm_ball_count(3, 5), Some(3367));
        assert_eq!(norm_ball(3, 5).unwrap().count(), 3367);
        assert_eq!(box_oracle(3, 5).len(), 3367);
    }

    #[test]
    fn matches_box_oracle_and_formula_small_range() {
        for d in 1..=5usize {
            for k in 0..=4u64 {
                let want = box_oracle(k as i64, d);
                let got: BTreeSet<Vec<i64>> = norm_ball(k, d).unwrap().map(|v| v.0).collect();
                assert_eq!(got, want, "k={k} d={d}");
                assert_eq!(got.len() as u128, norm_ball_count(k, d).unwrap());
            }
        }
    }

    #[test]
    fn one_dimensional_count_is_2k_plus_1() {
        for k in 0..=10u64 {
            assert_eq!(norm_ball_count(k, 1), Some(2 * k as u128 + 1));
            assert_eq!(norm_ball(k, 1).unwrap().count() as u128, 2 * k as u128 + 1);
        }
    }

    #[test]
    fn parallel_split_covers_ball_exactly_once() {
        for d in 1..=4usize {
            for k in 1..=3i64 {
                let mut seen = Vec::new();
                for m in -k..=0 {
                    for first in m..=(m + k) {
                        visit_block_with_first(m, k, d, first, &mut |x| seen.push(x.to_vec()));
                    }
                }
                let direct: BTreeSet<Vec<i64>> =
                    norm_ball(k as u64, d).unwrap().map(|v| v.0).collect();
                let split: BTreeSet<Vec<i64>> = seen.iter().cloned().collect();
                assert_eq!(seen.len(), split.len(), "duplicate in split k={k} d={d}");
                assert_eq!(split, direct, "k={k} d={d}");
            }
        }
    }

    #[test]
    fn count_overflow_is_signalled() {
        assert!(norm_ball(u64::MAX, 6).is_err());
        assert!(norm_ball_count(u64::MAX, 6).is_none());
    }
}
