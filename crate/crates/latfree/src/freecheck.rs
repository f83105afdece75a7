//! Exact lattice-freeness predicates.
//!
//! A d-lattice M is "free" when it meets the closed standard simplex only in
//! its vertices. For cyclic M(y) this reduces to a residue criterion: M(y)
//! is free iff for every multiplier m' in [1, m-1] the residues of m'·y
//! modulo m sum to more than m. A residue sum of exactly m lands on the
//! facet `Σ x_i = 1` and still violates freeness, hence the strict
//! inequality. For a general d-lattice the same argument runs over one
//! representative per coset of Z^d.

use crate::certificate::{FreenessCertificate, RationalPoint};
use crate::error::{Error, Result};
use crate::lattice::{CyclicLattice, GeneralLattice};
use crate::limits::Limits;
use crate::simplex::Simplex;
use crate::vector::IntVector;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

/// Below this modulus the multiplier loop stays sequential.
const PARALLEL_RESIDUE_THRESHOLD: u64 = 1 << 21;

/// Residue criterion for cyclic lattices, O(m·d).
///
/// The witness, when the lattice is not free, is `(residues of m'·y)/m` for
/// the smallest violating multiplier m' — deterministic regardless of how
/// the loop is split across threads.
pub fn is_free_cyclic(lattice: &CyclicLattice) -> FreenessCertificate {
    let m = lattice.modulus();
    let y = lattice.generator().entries();

    let violation = if m <= PARALLEL_RESIDUE_THRESHOLD {
        scan_multipliers(y, m, 1, m)
    } else {
        let chunk = 1 << 16;
        let chunks: Vec<(u64, u64)> = (1..m)
            .step_by(chunk as usize)
            .map(|lo| (lo, (lo + chunk).min(m)))
            .collect();
        chunks
            .par_iter()
            .find_map_first(|&(lo, hi)| scan_multipliers(y, m, lo, hi))
    };

    match violation {
        None => FreenessCertificate::free(),
        Some(mp) => {
            let residues: Vec<i64> = y
                .iter()
                .map(|&yi| ((mp as u128 * yi as u128) % m as u128) as i64)
                .collect();
            FreenessCertificate::not_free(RationalPoint {
                numerators: IntVector::new(residues),
                denominator: m as i64,
            })
        }
    }
}

/// Scan multipliers in [lo, hi) in increasing order; return the first one
/// whose residue sum is at most m. Residues are maintained incrementally.
fn scan_multipliers(y: &[i64], m: u64, lo: u64, hi: u64) -> Option<u64> {
    debug_assert!(lo >= 1);
    let d = y.len();
    let mut residues: Vec<u64> = y
        .iter()
        .map(|&yi| ((lo as u128 * yi as u128) % m as u128) as u64)
        .collect();
    let mut sum: u128 = residues.iter().map(|&r| r as u128).sum();
    let mut mp = lo;
    loop {
        if sum <= m as u128 {
            return Some(mp);
        }
        mp += 1;
        if mp >= hi {
            return None;
        }
        for i in 0..d {
            let r = residues[i] + y[i] as u64;
            residues[i] = if r >= m { r - m } else { r };
            sum += y[i] as u128;
            if r >= m {
                sum -= m as u128;
            }
        }
    }
}

/// One representative per coset of Z^d in M, componentwise in [0, 1).
///
/// Representatives come out as `numerators / v` with v the lattice
/// denominator. The walk is a digit box over the column Hermite form of the
/// inverse basis: it touches each coset exactly once and the total equals
/// the index.
pub struct CosetReps {
    /// Scaled basis of v·M (column HNF, lower triangular), as i64 columns.
    hm_cols: Vec<Vec<i64>>,
    /// Digit radices: diagonal of the HNF of the inverse basis.
    radices: Vec<u64>,
    v: i64,
    digits: Vec<u64>,
    current: Vec<i64>,
    started: bool,
    done: bool,
    index: u64,
}

impl CosetReps {
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn denominator(&self) -> i64 {
        self.v
    }
}

pub fn coset_reps(lattice: &GeneralLattice, limits: &Limits) -> Result<CosetReps> {
    let d = lattice.dim();
    let v = lattice.denominator();
    let index = lattice.index_u64()?;
    limits.check("coset enumeration", index as u128, limits.coset_index)?;

    let hm = lattice.canonical_scaled_basis();
    // Inverse basis C = B^{-1} = v·Hm^{-1}: integral because Z^d ⊆ M.
    let c = crate::duality::inverse_of(&hm, v);
    let h = c.col_hnf().expect("inverse basis is nonsingular");

    let radices: Vec<u64> = (0..d)
        .map(|i| h.get(i, i).to_u64().expect("radix bounded by the index"))
        .collect();
    debug_assert_eq!(radices.iter().product::<u64>(), index);

    let hm_cols: Vec<Vec<i64>> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| {
                    hm.get(i, j)
                        .to_i64()
                        .expect("scaled basis entries bounded by the denominator")
                        .rem_euclid(v)
                })
                .collect()
        })
        .collect();

    Ok(CosetReps {
        hm_cols,
        radices,
        v,
        digits: vec![0; d],
        current: vec![0; d],
        started: false,
        done: false,
        index,
    })
}

impl Iterator for CosetReps {
    type Item = RationalPoint;

    fn next(&mut self) -> Option<RationalPoint> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(RationalPoint {
                numerators: IntVector::new(self.current.clone()),
                denominator: self.v,
            });
        }
        // Mixed-radix odometer, least significant digit last; numerators are
        // updated incrementally modulo v.
        let d = self.digits.len();
        let mut j = d;
        loop {
            if j == 0 {
                self.done = true;
                return None;
            }
            j -= 1;
            if self.digits[j] + 1 < self.radices[j] {
                self.digits[j] += 1;
                for (cur, &col) in self.current.iter_mut().zip(&self.hm_cols[j]) {
                    *cur += col;
                    if *cur >= self.v {
                        *cur -= self.v;
                    }
                }
                break;
            }
            // Reset digit j to zero: subtract (radix-1)·col, i.e. add col
            // once more (radix·col ≡ the carry that lands in higher digits,
            // handled by continuing the loop) — cheaper: subtract the full
            // contribution of this digit.
            let steps = self.digits[j];
            self.digits[j] = 0;
            for (cur, &col) in self.current.iter_mut().zip(&self.hm_cols[j]) {
                let sub = (steps as i128 * col as i128) % self.v as i128;
                let mut t = *cur as i128 - sub;
                if t < 0 {
                    t += self.v as i128;
                }
                *cur = t as i64;
            }
        }
        Some(RationalPoint {
            numerators: IntVector::new(self.current.clone()),
            denominator: self.v,
        })
    }
}

/// Coset-representative criterion for general d-lattices: M is free iff no
/// nonzero representative has coordinate sum at most 1. Witness: the first
/// violating representative in the canonical enumeration order.
pub fn is_free_general(lattice: &GeneralLattice, limits: &Limits) -> Result<FreenessCertificate> {
    for rep in coset_reps(lattice, limits)? {
        if rep.numerators.is_zero() {
            continue;
        }
        if rep.coordinate_sum_at_most_one() {
            return Ok(FreenessCertificate::not_free(rep));
        }
    }
    Ok(FreenessCertificate::free())
}

/// All integer points of the simplex, boundary included, by an exact pruned
/// scan of the bounding box. Points come out in lexicographic order.
pub fn integer_points_in_simplex(s: &Simplex, limits: &Limits) -> Result<Vec<IntVector>> {
    let d = s.dim();
    let verts = s.vertices();

    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for v in verts {
        for j in 0..d {
            lo[j] = lo[j].min(v[j]);
            hi[j] = hi[j].max(v[j]);
        }
    }
    let volume: u128 = (0..d)
        .map(|j| (hi[j] - lo[j] + 1) as u128)
        .try_fold(1u128, |acc, w| acc.checked_mul(w))
        .ok_or_else(|| Error::CountOverflow("bounding box volume".into()))?;
    limits.check("integer point enumeration", volume, limits.box_points)?;

    // Membership of x: with A the difference matrix and D = |det A| (sign
    // normalized positive), μ = adj(A)(x - v_0) must satisfy μ_i ≥ 0 and
    // Σ μ_i ≤ D. Express as d+1 affine forms g_t(x) = row_t·x + c_t ≥ 0.
    let a = s.vertex_diff_matrix();
    let mut det = a.det_bareiss();
    let mut adj = a.adjugate();
    if det.is_negative() {
        det = -det;
        adj = adj.neg();
    }
    let base: Vec<BigInt> = s.base_vertex().entries().iter().map(|&x| BigInt::from(x)).collect();
    let shift = adj.mul_vec(&base);

    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(d + 1);
    let mut consts: Vec<i128> = Vec::with_capacity(d + 1);
    let to_i128 = |b: &BigInt| -> Result<i128> {
        b.to_i128()
            .ok_or_else(|| Error::CountOverflow("cofactor magnitude exceeds i128".into()))
    };
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            row.push(to_i128(adj.get(i, j))?);
        }
        rows.push(row);
        consts.push(-to_i128(&shift[i])?);
    }
    let last_row: Vec<i128> = (0..d).map(|j| -rows.iter().map(|r| r[j]).sum::<i128>()).collect();
    let last_const: i128 = to_i128(&det)? - consts.iter().sum::<i128>();
    rows.push(last_row);
    consts.push(last_const);

    // Interval bounds of the tail contribution per depth and form, for exact
    // pruning of partial assignments.
    let nforms = d + 1;
    let mut max_rest = vec![vec![0i128; nforms]; d + 1];
    for depth in (0..d).rev() {
        for t in 0..nforms {
            let c = rows[t][depth];
            let contrib = if c >= 0 {
                c * hi[depth] as i128
            } else {
                c * lo[depth] as i128
            };
            max_rest[depth][t] = max_rest[depth + 1][t] + contrib;
        }
    }

    let mut out = Vec::new();
    let mut x = lo.clone();
    let mut partial = vec![vec![0i128; nforms]; d + 1];
    partial[0] = consts.clone();

    fn descend(
        depth: usize,
        d: usize,
        lo: &[i64],
        hi: &[i64],
        rows: &[Vec<i128>],
        max_rest: &[Vec<i128>],
        x: &mut Vec<i64>,
        partial: &mut Vec<Vec<i128>>,
        out: &mut Vec<IntVector>,
    ) {
        if depth == d {
            if partial[d].iter().all(|&g| g >= 0) {
                out.push(IntVector::new(x.clone()));
            }
            return;
        }
        for xv in lo[depth]..=hi[depth] {
            x[depth] = xv;
            let (head, tail) = partial.split_at_mut(depth + 1);
            for t in 0..rows.len() {
                tail[0][t] = head[depth][t] + rows[t][depth] * xv as i128;
            }
            // A form that cannot reach 0 even with the most favorable tail
            // kills the whole branch.
            if (0..rows.len()).all(|t| partial[depth + 1][t] + max_rest[depth + 1][t] >= 0) {
                descend(depth + 1, d, lo, hi, rows, max_rest, x, partial, out);
            }
        }
    }

    descend(0, d, &lo, &hi, &rows, &max_rest, &mut x, &mut partial, &mut out);
    Ok(out)
}

/// Count of integer points in the dilate `t·σ_d` computed by direct
/// enumeration; cross-checks Ehrhart-style formulas in tests.
pub fn standard_dilate_point_count(d: usize, t: i64, limits: &Limits) -> Result<u64> {
    let points = integer_points_in_simplex(&Simplex::standard(d).dilate(t)?, limits)?;
    Ok(points.len() as u64)
}
