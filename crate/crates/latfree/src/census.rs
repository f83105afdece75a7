//! Exhaustive censuses over the cyclic lattices of a prime modulus.
//!
//! For a prime p the lattices M(y) in dimension d are in bijection with the
//! lines of (Z/pZ)^d; there are exactly (p^d - 1)/(p - 1) of them. A census
//! walks every line once (canonical generator: first nonzero coordinate 1),
//! counts how many are not lattice-free and how many have width at most k,
//! and checks the exact counts against the proven upper bounds.
//!
//! Lines are ranked 0..total, so the walk can be partitioned across threads
//! and checkpointed; counters merge associatively and the final report is
//! independent of the partitioning.

use crate::error::{Error, Result};
use crate::freecheck::is_free_cyclic;
use crate::lattice::{CyclicLattice, Lattice};
use crate::limits::Limits;
use crate::normball::norm_ball_count;
use crate::planner::{factorial, is_prime_u64};
use crate::width::width_at_most;
use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// `(p^d - 1)/(p - 1)`, the number of lines of `(Z/pZ)^d`; `None` on
/// overflow.
pub fn line_count(d: usize, p: u64) -> Option<u128> {
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..d {
        total = total.checked_add(power)?;
        power = power.checked_mul(p as u128)?;
    }
    Some(total)
}

pub(crate) fn check_line_budget(d: usize, p: u64, limits: &Limits) -> Result<u128> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let total = line_count(d, p)
        .ok_or_else(|| Error::CountOverflow(format!("line count for d={d}, p={p}")))?;
    limits.check("line enumeration", total, limits.lines)?;
    Ok(total)
}

/// Decode the canonical generator of the line with the given rank: leading
/// position with coordinate 1, then base-p digits (most significant first).
pub(crate) fn line_from_rank(d: usize, p: u64, mut rank: u128) -> CyclicLattice {
    let mut lead = 0usize;
    loop {
        let block = (p as u128).pow((d - 1 - lead) as u32);
        if rank < block {
            break;
        }
        rank -= block;
        lead += 1;
    }
    let mut y = vec![0i64; d];
    y[lead] = 1;
    for j in (lead + 1..d).rev() {
        y[j] = (rank % p as u128) as i64;
        rank /= p as u128;
    }
    debug_assert_eq!(rank, 0);
    CyclicLattice::new(d, p, y).expect("canonical generators always have order p")
}

/// Iterator over one canonical lattice per line of `(Z/pZ)^d`.
pub fn enumerate_lines(d: usize, p: u64, limits: &Limits) -> Result<LineIter> {
    let total = check_line_budget(d, p, limits)?;
    Ok(LineIter {
        d,
        p,
        rank: 0,
        total,
    })
}

pub struct LineIter {
    d: usize,
    p: u64,
    rank: u128,
    total: u128,
}

impl LineIter {
    pub fn total(&self) -> u128 {
        self.total
    }
}

impl Iterator for LineIter {
    type Item = CyclicLattice;
    fn next(&mut self) -> Option<CyclicLattice> {
        if self.rank >= self.total {
            return None;
        }
        let l = line_from_rank(self.d, self.p, self.rank);
        self.rank += 1;
        Some(l)
    }
}

/// Number of integer points in the dilate `t·σ_d`: `(t+1)(t+2)...(t+d)/d!`.
pub fn standard_dilate_count(d: u32, t: u64) -> BigUint {
    let mut num = BigUint::one();
    for i in 1..=d as u64 {
        num *= BigUint::from(t + i);
    }
    num / factorial(d)
}

/// Upper bound for the number of non-free lines; the count of interior-ish
/// dilate points minus the d+1 vertex classes.
pub fn f_bound(d: usize, p: u64) -> BigUint {
    standard_dilate_count(d as u32, p) - BigUint::from(d as u64 + 1)
}

/// Sharp bracketed bound for the number of lines of width at most k:
/// `2·[(k+1)^(d+1) - k^(d+1)]·p^(d-2)`, taken as a floor for d = 1 where the
/// p-power is negative.
pub fn g_bound(d: usize, p: u64, k: u64) -> BigUint {
    let n_kd = BigUint::from(k + 1).pow(d as u32 + 1) - BigUint::from(k).pow(d as u32 + 1);
    let num = n_kd * 2u32 * BigUint::from(p).pow(d as u32);
    num / BigUint::from(p).pow(2)
}

/// Mean-value relaxation of [`g_bound`]: `2(d+1)(k+1)^d p^(d-2)`. The
/// existence condition is stated with this form; censuses use the bracketed
/// one. Exposed so both can be compared.
pub fn g_bound_relaxed(d: usize, p: u64, k: u64) -> BigUint {
    let num = BigUint::from(2 * (d as u64 + 1))
        * BigUint::from(k + 1).pow(d as u32)
        * BigUint::from(p).pow(d as u32);
    num / BigUint::from(p).pow(2)
}

/// Count of lines that are not lattice-free, with the proven bound.
pub fn exact_f(d: usize, p: u64, limits: &Limits) -> Result<(u64, BigUint)> {
    let report = existence_census(d, p, 0, limits)?;
    Ok((report.f_exact, report.f_bound))
}

/// Count of lines of width at most k, with the bracketed bound.
pub fn exact_g(d: usize, p: u64, k: u64, limits: &Limits) -> Result<(u64, BigUint)> {
    if k < 1 {
        return Err(Error::InvalidInput("width threshold k must be at least 1".into()));
    }
    let report = existence_census(d, p, k, limits)?;
    Ok((report.g_exact, report.g_bound))
}

/// Exact census of the lines of `(Z/pZ)^d`. All fields of the report are
/// serialized as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    #[serde(with = "crate::numstr::u64_string")]
    pub d: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub p: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub k: u64,
    #[serde(with = "crate::numstr::biguint_string")]
    pub lines_total: BigUint,
    #[serde(with = "crate::numstr::u64_string")]
    pub f_exact: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub g_exact: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub free_and_wide_exact: u64,
    #[serde(with = "crate::numstr::biguint_string")]
    pub f_bound: BigUint,
    #[serde(with = "crate::numstr::biguint_string")]
    pub g_bound: BigUint,
}

#[derive(Debug, Clone, Copy, Default)]
struct Counters {
    lines: u64,
    f: u64,
    g: u64,
    free_and_wide: u64,
}

impl Counters {
    fn merge(self, other: Counters) -> Counters {
        Counters {
            lines: self.lines + other.lines,
            f: self.f + other.f,
            g: self.g + other.g,
            free_and_wide: self.free_and_wide + other.free_and_wide,
        }
    }
}

fn eval_line(lattice: &CyclicLattice, k: u64, limits: &Limits) -> Result<Counters> {
    let free = is_free_cyclic(lattice).is_free();
    let narrow = if k >= 1 {
        width_at_most(&Lattice::Cyclic(lattice.clone()), k, limits)?.is_some()
    } else {
        false
    };
    Ok(Counters {
        lines: 1,
        f: u64::from(!free),
        g: u64::from(narrow),
        free_and_wide: u64::from(free && !narrow),
    })
}

/// Resumable census state; serialized to the checkpoint file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CensusState {
    #[serde(with = "crate::numstr::u64_string")]
    pub d: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub p: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub k: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub next_rank: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub total: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub f_exact: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub g_exact: u64,
    #[serde(with = "crate::numstr::u64_string")]
    pub free_and_wide_exact: u64,
}

/// Streaming census runner: processes line-rank blocks (each block in
/// parallel), keeping constant memory, optionally persisting a checkpoint
/// between blocks so long runs are resumable.
pub struct CensusRunner {
    state: CensusState,
    block_size: u64,
}

impl CensusRunner {
    pub fn new(d: usize, p: u64, k: u64, limits: &Limits) -> Result<CensusRunner> {
        let total = check_line_budget(d, p, limits)?;
        let total = u64::try_from(total)
            .map_err(|_| Error::CountOverflow("line count exceeds u64".into()))?;
        Ok(CensusRunner {
            state: CensusState {
                d: d as u64,
                p,
                k,
                next_rank: 0,
                total,
                f_exact: 0,
                g_exact: 0,
                free_and_wide_exact: 0,
            },
            block_size: 1 << 16,
        })
    }

    /// Load a previous checkpoint if one exists and matches the parameters;
    /// start fresh otherwise.
    pub fn resume_or_new(
        path: &Path,
        d: usize,
        p: u64,
        k: u64,
        limits: &Limits,
    ) -> Result<CensusRunner> {
        let mut runner = CensusRunner::new(d, p, k, limits)?;
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            let saved: CensusState = serde_json::from_str(&text)?;
            if saved.d == d as u64 && saved.p == p && saved.k == k && saved.total == runner.state.total
            {
                runner.state = saved;
            }
        }
        Ok(runner)
    }

    pub fn state(&self) -> &CensusState {
        &self.state
    }

    pub fn is_done(&self) -> bool {
        self.state.next_rank >= self.state.total
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(&self.state)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Process the next block of lines in parallel; returns whether the
    /// census is complete.
    pub fn step(&mut self, limits: &Limits) -> Result<bool> {
        if self.is_done() {
            return Ok(true);
        }
        let lo = self.state.next_rank;
        let hi = (lo + self.block_size).min(self.state.total);
        let d = self.state.d as usize;
        let p = self.state.p;
        let k = self.state.k;
        let merged = (lo..hi)
            .into_par_iter()
            .map(|rank| eval_line(&line_from_rank(d, p, rank as u128), k, limits))
            .try_reduce(Counters::default, |a, b| Ok(a.merge(b)))?;
        self.state.f_exact += merged.f;
        self.state.g_exact += merged.g;
        self.state.free_and_wide_exact += merged.free_and_wide;
        self.state.next_rank = hi;
        debug_assert_eq!(merged.lines, hi - lo);
        Ok(self.is_done())
    }

    pub fn run(&mut self, limits: &Limits, checkpoint: Option<&Path>) -> Result<CensusReport> {
        while !self.step(limits)? {
            if let Some(path) = checkpoint {
                self.save(path)?;
            }
        }
        if let Some(path) = checkpoint {
            self.save(path)?;
        }
        self.report()
    }

    pub fn report(&self) -> Result<CensusReport> {
        if !self.is_done() {
            return Err(Error::InvalidInput("census is not complete".into()));
        }
        let s = &self.state;
        let d = s.d as usize;
        let report = CensusReport {
            d: s.d,
            p: s.p,
            k: s.k,
            lines_total: BigUint::from(s.total),
            f_exact: s.f_exact,
            g_exact: s.g_exact,
            free_and_wide_exact: s.free_and_wide_exact,
            f_bound: f_bound(d, s.p),
            g_bound: g_bound(d, s.p, s.k),
        };
        report.assert_invariants();
        Ok(report)
    }
}

impl CensusReport {
    /// The counting identities and proven bounds every census must satisfy.
    pub fn assert_invariants(&self) {
        let total = line_count(self.d as usize, self.p).expect("validated at construction");
        assert_eq!(BigUint::from(self.lines_total.clone()), BigUint::from(total));
        assert!(
            BigUint::from(self.f_exact) <= self.f_bound,
            "non-free count exceeds its bound"
        );
        if self.k >= 1 && self.k < self.p {
            assert!(
                BigUint::from(self.g_exact) <= self.g_bound,
                "narrow count exceeds its bound"
            );
        }
        let spoken_for = self.f_exact as u128 + self.g_exact as u128;
        let floor = (total as i128) - (spoken_for as i128);
        assert!(
            self.free_and_wide_exact as i128 >= floor,
            "inclusion-exclusion floor violated"
        );
    }
}

/// Full census at (d, p, k): exact f, g, and free-and-wide counts with
/// bounds, all invariants asserted.
pub fn existence_census(d: usize, p: u64, k: u64, limits: &Limits) -> Result<CensusReport> {
    if k >= 1 {
        // A level scan at k must be within budget before walking p^(d-1) lines.
        let candidates = norm_ball_count(k, d)
            .ok_or_else(|| Error::CountOverflow("norm ball count".into()))?;
        limits.check("width level scan", candidates, limits.level_candidates)?;
    }
    CensusRunner::new(d, p, k, limits)?.run(limits, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn line_counts_match_formula() {
        assert_eq!(line_count(2, 2), Some(3));
        assert_eq!(line_count(1, 7), Some(1));
        assert_eq!(line_count(3, 3), Some(13));
        for (d, p) in [(2usize, 2u64), (2, 5), (3, 3), (3, 7), (4, 5)] {
            let lines: Vec<_> = enumerate_lines(d, p, &limits()).unwrap().collect();
            assert_eq!(lines.len() as u128, line_count(d, p).unwrap());
        }
    }

    #[test]
    fn d2_p2_lines_are_the_three_expected() {
        let got: BTreeSet<Vec<i64>> = enumerate_lines(2, 2, &limits())
            .unwrap()
            .map(|l| l.generator().0.clone())
            .collect();
        let want: BTreeSet<Vec<i64>> =
            [vec![1, 0], vec![1, 1], vec![0, 1]].into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn canonical_enumeration_equals_quotient_of_all_vectors() {
        // Enumerate every nonzero y in (Z/pZ)^d, canonicalize to the line
        // representative, and compare with the direct canonical walk.
        for (d, p) in [(2usize, 5u64), (3, 3)] {
            let direct: BTreeSet<Vec<i64>> = enumerate_lines(d, p, &limits())
                .unwrap()
                .map(|l| l.generator().0.clone())
                .collect();
            let mut quotient = BTreeSet::new();
            let total = (p as u64).pow(d as u32);
            for code in 1..total {
                let mut y = vec![0i64; d];
                let mut c = code;
                for j in (0..d).rev() {
                    y[j] = (c % p) as i64;
                    c /= p;
                }
                let l = CyclicLattice::new(d, p, y).unwrap();
                quotient.insert(l.canonical_prime_generator().unwrap().0);
            }
            assert_eq!(direct, quotient, "d={d} p={p}");
        }
    }

    #[test]
    fn rejects_non_prime_moduli() {
        assert!(matches!(
            enumerate_lines(3, 6, &limits()),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn line_budget_refusal() {
        let tiny = Limits {
            lines: 5,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_lines(3, 5, &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn dilate_count_formula_examples() {
        // (p+1)(p+2)/2 for d = 2 etc.
        assert_eq!(standard_dilate_count(2, 2), BigUint::from(6u32));
        assert_eq!(standard_dilate_count(3, 1), BigUint::from(4u32));
        assert_eq!(standard_dilate_count(4, 3), BigUint::from(35u32));
    }

    #[test]
    fn exact_f_examples() {
        // d = 1: the only line (1/p)Z is never free; bound (p+1) - 2.
        let (count, bound) = exact_f(1, 5, &limits()).unwrap();
        assert_eq!(count, 1);
        assert_eq!(bound, BigUint::from(4u32));

        // d = 2: no free line exists at any prime.
        let (count, _) = exact_f(2, 5, &limits()).unwrap();
        assert_eq!(count as u128, line_count(2, 5).unwrap());

        // d = 3, p = 5: the bound is (6·7·8)/6 - 4 = 52.
        let (count, bound) = exact_f(3, 5, &limits()).unwrap();
        assert_eq!(bound, BigUint::from(52u32));
        assert!(BigUint::from(count) <= bound);
    }

    #[test]
    fn exact_g_examples() {
        // d = 1, k = 4 < p: the unique lattice has width p = 5.
        let (count, _) = exact_g(1, 5, 4, &limits()).unwrap();
        assert_eq!(count, 0);

        // d = 3, p = 5, k = 1: bound 2(2^4 - 1)·5 = 150.
        let (_, bound) = exact_g(3, 5, 1, &limits()).unwrap();
        assert_eq!(bound, BigUint::from(150u32));

        // d = 2, p = 3, k = 3: every line has width at most p.
        let (count, _) = exact_g(2, 3, 3, &limits()).unwrap();
        assert_eq!(count as u128, line_count(2, 3).unwrap());
    }

    #[test]
    fn census_k0_counts_free_lines() {
        let report = existence_census(3, 5, 0, &limits()).unwrap();
        assert_eq!(
            report.free_and_wide_exact,
            (line_count(3, 5).unwrap() as u64) - report.f_exact
        );
    }

    #[test]
    fn dimension_three_free_lines_have_width_one() {
        let report = existence_census(3, 7, 1, &limits()).unwrap();
        assert_eq!(report.free_and_wide_exact, 0);
    }

    #[test]
    fn census_d4_p11_holds_invariants() {
        // assert_invariants runs inside; this also freezes the exact counts.
        let report = existence_census(4, 11, 1, &limits()).unwrap();
        assert_eq!(report.lines_total, BigUint::from(1464u32));
        assert!(report.f_exact <= 1364); // bound: 12·13·14·15/24 - 5
    }

    #[test]
    fn checkpoint_resume_matches_one_shot() {
        let dir = tempfile::tempdir().unwrap();
        let ckpt = dir.path().join("census.ckpt");
        let l = limits();

        let mut oneshot = CensusRunner::new(3, 7, 1, &l).unwrap();
        let want = oneshot.run(&l, None).unwrap();

        // Simulate an interrupted run: small blocks, stop midway, reload.
        let mut first = CensusRunner::new(3, 7, 1, &l).unwrap();
        first.block_size = 10;
        first.step(&l).unwrap();
        first.step(&l).unwrap();
        first.save(&ckpt).unwrap();
        drop(first);

        let mut resumed = CensusRunner::resume_or_new(&ckpt, 3, 7, 1, &l).unwrap();
        assert_eq!(resumed.state().next_rank, 20);
        resumed.block_size = 7;
        let got = resumed.run(&l, Some(&ckpt)).unwrap();
        assert_eq!(got, want);

        // Parameter mismatch discards the checkpoint.
        let fresh = CensusRunner::resume_or_new(&ckpt, 3, 7, 2, &l).unwrap();
        assert_eq!(fresh.state().next_rank, 0);
    }
}
