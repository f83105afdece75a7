//! Exact lattice width.
//!
//! The width of a d-lattice M is the width norm of a shortest nonzero vector
//! of the dual lattice M*. The engine scans width-norm levels k = 1, 2, ...
//! exhaustively; termination is unconditional because m·e_1 is always dual
//! (v·e_1 for a basis lattice), so the scan stops at the modulus at the
//! latest. The width of a simplex is the width of its associated d-lattice;
//! the certificate carries the covector transported back to the simplex
//! side, where its vertex spread reproduces the certified value.

use crate::certificate::{WidthCertificate, WidthScope};
use crate::duality;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::limits::Limits;
use crate::normball::{norm_ball, norm_ball_count, visit_block_with_first};
use crate::simplex::Simplex;
use crate::vector::{width_norm, IntVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

/// Level scans larger than this are split across threads.
const PARALLEL_LEVEL_THRESHOLD: u128 = 1 << 15;

/// Exact dual-membership test, precomputed per lattice.
///
/// For cyclic M(y): ξ ∈ M* iff ξ·y ≡ 0 (mod m). For a basis lattice
/// (1/v)·Λ·Z^d: ξ ∈ M* iff Λᵀξ ≡ 0 (mod v) componentwise.
pub struct DualTester {
    rows: Vec<Vec<u64>>,
    modulus: u64,
}

impl DualTester {
    pub fn new(lattice: &Lattice) -> DualTester {
        match lattice {
            Lattice::Cyclic(l) => DualTester {
                rows: vec![l.generator().entries().iter().map(|&x| x as u64).collect()],
                modulus: l.modulus(),
            },
            Lattice::General(l) => {
                let v = l.denominator();
                let d = l.dim();
                let basis = l.basis_rows();
                // Rows of Λᵀ are the columns of Λ, reduced modulo v.
                let rows = (0..d)
                    .map(|j| {
                        (0..d)
                            .map(|i| basis[i][j].rem_euclid(v) as u64)
                            .collect()
                    })
                    .collect();
                DualTester {
                    rows,
                    modulus: v as u64,
                }
            }
        }
    }

    #[inline]
    pub fn is_dual(&self, xi: &[i64]) -> bool {
        let m = self.modulus as u128;
        self.rows.iter().all(|row| {
            let mut acc: u128 = 0;
            for (&r, &x) in row.iter().zip(xi) {
                let xm = x.rem_euclid(self.modulus as i64) as u128;
                acc = (acc + r as u128 * xm) % m;
            }
            acc == 0
        })
    }
}

/// `true` iff ξ takes integer values on all of M.
pub fn dual_member(lattice: &Lattice, xi: &IntVector) -> bool {
    assert_eq!(lattice.dim(), xi.dim(), "dimension mismatch");
    DualTester::new(lattice).is_dual(xi.entries())
}

/// Canonical representative used to break ties among minimizers: the sign
/// form with positive leading entry, smallest in colexicographic order.
fn better(a: Option<IntVector>, b: Option<IntVector>) -> Option<IntVector> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.colex_cmp(&a) == std::cmp::Ordering::Less {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

/// Scan the level `width_norm == k` for dual vectors; returns the tie-break
/// winner if the level contains any. The candidate count must already have
/// been checked against the budget.
fn scan_level(tester: &DualTester, k: u64, d: usize, count: u128) -> Option<IntVector> {
    let ki = k as i64;
    let check = |x: &[i64]| -> Option<IntVector> {
        if width_norm(x) == ki && x.iter().any(|&e| e != 0) && tester.is_dual(x) {
            Some(IntVector::from(x).sign_canonical())
        } else {
            None
        }
    };

    if count < PARALLEL_LEVEL_THRESHOLD || d == 1 {
        let mut best: Option<IntVector> = None;
        for x in norm_ball(k, d).expect("count checked by caller") {
            best = better(best, check(x.entries()));
        }
        return best;
    }

    // Deterministic parallel split: one task per (block minimum, first
    // digit); the merge is an associative min, so the result is identical to
    // the sequential scan no matter how tasks are scheduled.
    let mut tasks = Vec::new();
    for m in -ki..=0 {
        for first in m..=(m + ki) {
            tasks.push((m, first));
        }
    }
    tasks
        .par_iter()
        .map(|&(m, first)| {
            let mut best: Option<IntVector> = None;
            visit_block_with_first(m, ki, d, first, &mut |x| {
                best = better(best.take(), check(x));
            });
            best
        })
        .reduce(|| None, better)
}

/// Width of a lattice together with a certified shortest dual vector.
pub fn width_of_lattice(lattice: &Lattice, limits: &Limits) -> Result<WidthCertificate> {
    match width_up_to(lattice, None, limits)? {
        Some(cert) => Ok(cert),
        None => unreachable!("level scan is bounded by the modulus, which is always dual"),
    }
}

/// Like [`width_of_lattice`] but gives up (returning `Ok(None)`) once the
/// level exceeds `k_cap`. Censuses use this: deciding `width ≤ k` does not
/// need the exact width of wide lattices.
pub fn width_at_most(
    lattice: &Lattice,
    k_cap: u64,
    limits: &Limits,
) -> Result<Option<WidthCertificate>> {
    width_up_to(lattice, Some(k_cap), limits)
}

fn width_up_to(
    lattice: &Lattice,
    k_cap: Option<u64>,
    limits: &Limits,
) -> Result<Option<WidthCertificate>> {
    let d = lattice.dim();
    let tester = DualTester::new(lattice);
    // m·e_1 (cyclic) or v·e_1 (basis form) is dual, so the scan terminates.
    let hard_bound = tester.modulus;
    let stop = k_cap.map_or(hard_bound, |c| c.min(hard_bound));

    for k in 1..=stop {
        let count = norm_ball_count(k, d).ok_or_else(|| {
            Error::CountOverflow(format!("norm ball count for k={k}, d={d}"))
        })?;
        limits.check("width level scan", count, limits.level_candidates)?;
        if let Some(min) = scan_level(&tester, k, d, count) {
            debug_assert_eq!(min.width_norm(), k as i64);
            debug_assert!(tester.is_dual(min.entries()));
            let scope = match lattice {
                Lattice::Cyclic(l) => WidthScope::CyclicLattice(l.clone()),
                Lattice::General(l) => WidthScope::GeneralLattice(l.clone()),
            };
            return Ok(Some(WidthCertificate {
                width: k as i64,
                minimizer: min,
                scope,
            }));
        }
    }
    if k_cap.is_none() {
        // The modulus level always contains m·e_1; reaching this point means
        // the scan logic is broken.
        unreachable!("no dual vector found up to the modulus bound");
    }
    Ok(None)
}

/// Width of a simplex through its lattice, with the minimizer transported
/// back: the dual certificate ξ pulls back to the covector u solving
/// `Aᵀ u = ξ`, whose vertex spread equals the certified width.
pub fn width_of_simplex(s: &Simplex, limits: &Limits) -> Result<WidthCertificate> {
    let (lattice, _record) = duality::lattice_from_simplex(s)?;
    let cert = width_of_lattice(&Lattice::General(lattice), limits)?;

    let a = s.vertex_diff_matrix();
    let det = a.det_bareiss();
    let adj_t = a.adjugate().transpose();
    let xi: Vec<BigInt> = cert
        .minimizer
        .entries()
        .iter()
        .map(|&x| BigInt::from(x))
        .collect();
    let scaled = adj_t.mul_vec(&xi);
    let mut u = Vec::with_capacity(s.dim());
    for e in &scaled {
        let (q, r) = e.div_rem(&det);
        assert!(
            r.is_zero(),
            "dual certificate must transport to an integral covector"
        );
        u.push(q.to_i64().ok_or_else(|| {
            Error::CountOverflow("transported covector exceeds machine range".into())
        })?);
    }
    let u = IntVector::new(u);

    // The transported covector must reproduce the certified width as a
    // vertex spread, and its image under Aᵀ must be the certificate.
    let spread = s.spread(&u);
    assert_eq!(
        spread,
        cert.width as i128,
        "vertex spread of the transported covector disagrees with the dual width"
    );

    Ok(WidthCertificate {
        width: cert.width,
        minimizer: u,
        scope: WidthScope::Simplex(s.clone()),
    })
}

/// Independent brute-force width oracle: minimize the vertex spread over all
/// nonzero covectors in the box `[-b, b]^d`. Complete only within the box;
/// costs `(2b+1)^d` evaluations.
pub fn width_brute_force(s: &Simplex, b: i64) -> (i64, IntVector) {
    assert!(b >= 1, "box radius must be positive");
    let d = s.dim();
    let mut best_w: i128 = i128::MAX;
    let mut best_u: Option<IntVector> = None;

    let mut u = vec![-b; d];
    loop {
        if u.iter().any(|&x| x != 0) {
            let w = s.spread(&IntVector::from(u.as_slice()));
            if w < best_w {
                best_w = w;
                best_u = Some(IntVector::from(u.as_slice()).sign_canonical());
            } else if w == best_w {
                best_u = better(
                    best_u.take(),
                    Some(IntVector::from(u.as_slice()).sign_canonical()),
                );
            }
        }
        let mut j = d;
        loop {
            if j == 0 {
                let w = i64::try_from(best_w).expect("spread fits machine width at box scale");
                return (w, best_u.expect("box contains a nonzero covector"));
            }
            j -= 1;
            if u[j] < b {
                u[j] += 1;
                for x in u[j + 1..].iter_mut() {
                    *x = -b;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{CyclicLattice, GeneralLattice};

    fn limits() -> Limits {
        Limits::default()
    }

    fn cyclic(dim: usize, p: u64, y: &[i64]) -> Lattice {
        Lattice::Cyclic(CyclicLattice::new(dim, p, y.to_vec()).unwrap())
    }

    fn standard(dim: usize) -> Lattice {
        Lattice::General(GeneralLattice::standard(dim))
    }

    #[test]
    fn dual_member_examples() {
        let l = cyclic(3, 5, &[1, 2, 3]);
        assert!(dual_member(&l, &IntVector::new(vec![0, 1, 1])));
        assert!(!dual_member(&l, &IntVector::new(vec![1, 0, 0])));
        assert!(dual_member(&l, &IntVector::new(vec![5, 0, 0])));
        assert!(dual_member(&l, &IntVector::new(vec![0, -1, -1])));

        let z3 = standard(3);
        assert!(dual_member(&z3, &IntVector::new(vec![2, -7, 1])));
    }

    #[test]
    fn dual_member_agrees_across_presentations() {
        let c = CyclicLattice::new(3, 7, vec![1, 2, 4]).unwrap();
        let g = Lattice::General(c.to_general());
        let c = Lattice::Cyclic(c);
        for xi in crate::normball::norm_ball(3, 3).unwrap() {
            assert_eq!(
                dual_member(&c, &xi),
                dual_member(&g, &xi),
                "xi = {xi}"
            );
        }
    }

    #[test]
    fn width_of_standard_lattice_is_one_with_e1() {
        let cert = width_of_lattice(&standard(4), &limits()).unwrap();
        assert_eq!(cert.width, 1);
        assert_eq!(cert.minimizer, IntVector::unit(4, 0));
    }

    #[test]
    fn width_of_cyclic_example() {
        let cert = width_of_lattice(&cyclic(3, 5, &[1, 2, 3]), &limits()).unwrap();
        assert_eq!(cert.width, 1);
        assert_eq!(cert.minimizer, IntVector::new(vec![0, 1, 1]));
    }

    #[test]
    fn one_dimensional_width_equals_modulus() {
        let cert = width_of_lattice(&cyclic(1, 7, &[1]), &limits()).unwrap();
        assert_eq!(cert.width, 7);
    }

    #[test]
    fn width_of_simplex_examples() {
        for d in 1..=4 {
            let cert = width_of_simplex(&Simplex::standard(d), &limits()).unwrap();
            assert_eq!(cert.width, 1, "standard simplex in dimension {d}");
        }
        let double = Simplex::standard(2).dilate(2).unwrap();
        assert_eq!(width_of_simplex(&double, &limits()).unwrap().width, 2);
    }

    #[test]
    fn dilation_scales_width() {
        for t in 1..=3 {
            let s = Simplex::standard(3).dilate(t).unwrap();
            assert_eq!(width_of_simplex(&s, &limits()).unwrap().width, t);
        }
    }

    #[test]
    fn brute_force_examples() {
        let (w, _) = width_brute_force(&Simplex::standard(2), 1);
        assert_eq!(w, 1);
        let (w, _) = width_brute_force(&Simplex::standard(2).dilate(2).unwrap(), 3);
        assert_eq!(w, 2);
    }

    #[test]
    fn width_at_most_caps_the_scan() {
        let l = cyclic(1, 11, &[1]); // width 11
        assert!(width_at_most(&l, 4, &limits()).unwrap().is_none());
        assert!(width_at_most(&l, 11, &limits()).unwrap().is_some());
    }

    #[test]
    fn level_budget_refusal() {
        let tiny = Limits {
            level_candidates: 5,
            ..Limits::default()
        };
        let err = width_of_lattice(&cyclic(3, 5, &[1, 2, 3]), &tiny).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn parallel_and_sequential_level_scans_agree() {
        // Force both paths on the same level and compare certificates.
        let l = cyclic(4, 101, &[1, 27, 52, 88]);
        let tester = DualTester::new(&l);
        for k in 1..=3u64 {
            let count = norm_ball_count(k, 4).unwrap();
            let seq = {
                let mut best = None;
                for x in norm_ball(k, 4).unwrap() {
                    let e = x.entries();
                    if x.width_norm() == k as i64 && !x.is_zero() && tester.is_dual(e) {
                        best = better(best, Some(x.sign_canonical()));
                    }
                }
                best
            };
            let par = scan_level(&tester, k, 4, count.max(PARALLEL_LEVEL_THRESHOLD + 1));
            assert_eq!(seq, par, "k = {k}");
        }
    }

    #[test]
    fn negated_minimizer_ties_resolve_deterministically() {
        // Run the same width computation several times; the certificate must
        // be bit-identical (same sign-canonical colex-minimal minimizer).
        let l = cyclic(3, 13, &[1, 3, 9]);
        let first = width_of_lattice(&l, &limits()).unwrap();
        for _ in 0..5 {
            let again = width_of_lattice(&l, &limits()).unwrap();
            assert_eq!(again.width, first.width);
            assert_eq!(again.minimizer, first.minimizer);
        }
    }
}
