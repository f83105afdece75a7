//! d-lattices: lattices M with `Z^d ⊆ M ⊆ (1/m) Z^d`.
//!
//! Two concrete representations: [`CyclicLattice`] for `M(y) = Z^d + Z·(y/m)`
//! (determined by the line of `y` in `(Z/mZ)^d`) and [`GeneralLattice`] for an
//! arbitrary basis `(1/v)·Λ·Z^d`. Both validate their containment invariants
//! at construction, including on deserialization.

use crate::error::{Error, Result};
use crate::matrixint::IntMat;
use crate::vector::IntVector;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// `Z^d + Z·(1/m)·y` with `y` of additive order exactly `m` in `(Z/mZ)^d`.
///
/// The modulus is not required to be prime: composite orders (such as 57)
/// let lattices arising from simplices run through the fast residue path.
/// Censuses and searches restrict themselves to primes separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCyclic", into = "RawCyclic")]
pub struct CyclicLattice {
    dim: usize,
    modulus: u64,
    generator: IntVector,
}

impl CyclicLattice {
    pub fn new(dim: usize, modulus: u64, generator: Vec<i64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if generator.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: generator.len(),
            });
        }
        if modulus < 2 {
            return Err(Error::InvalidLattice("modulus must be at least 2".into()));
        }
        if modulus > i64::MAX as u64 {
            return Err(Error::InvalidLattice(
                "modulus too large for machine-width generator entries".into(),
            ));
        }
        let m = modulus as i64;
        let reduced: Vec<i64> = generator.iter().map(|&x| x.rem_euclid(m)).collect();
        let g = reduced.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g == 0 {
            return Err(Error::InvalidLattice(
                "generator is zero modulo m; the lattice would be Z^d".into(),
            ));
        }
        if g.gcd(&m) != 1 {
            return Err(Error::InvalidLattice(format!(
                "generator does not have additive order exactly {modulus} \
                 (gcd of entries and modulus is {})",
                g.gcd(&m)
            )));
        }
        Ok(CyclicLattice {
            dim,
            modulus,
            generator: IntVector::new(reduced),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator(&self) -> &IntVector {
        &self.generator
    }

    /// Group index `[M(y) : Z^d]`, which is the modulus.
    pub fn index(&self) -> BigUint {
        BigUint::from(self.modulus)
    }

    /// Line representative with first nonzero coordinate 1. Only defined for
    /// prime modulus, where every nonzero coordinate is invertible.
    pub fn canonical_prime_generator(&self) -> Result<IntVector> {
        let m = self.modulus as i64;
        let lead = self
            .generator
            .entries()
            .iter()
            .find(|&&x| x != 0)
            .copied()
            .expect("generator is nonzero by invariant");
        let inv = mod_inverse(lead, m).ok_or_else(|| {
            Error::InvalidLattice(format!(
                "leading coordinate {lead} is not invertible modulo {m}; \
                 canonical line representatives need a prime modulus"
            ))
        })?;
        Ok(IntVector::new(
            self.generator
                .entries()
                .iter()
                .map(|&x| mul_mod(inv, x, m))
                .collect(),
        ))
    }

    /// Whether `other` spans the same cyclic subgroup of `(1/m)Z^d / Z^d`,
    /// i.e. represents the same lattice. O(m·d) in the worst (composite)
    /// case; prime moduli short-circuit through canonical representatives.
    pub fn same_lattice(&self, other: &CyclicLattice) -> bool {
        if self.dim != other.dim || self.modulus != other.modulus {
            return false;
        }
        let m = self.modulus as i64;
        if let (Ok(a), Ok(b)) = (
            self.canonical_prime_generator(),
            other.canonical_prime_generator(),
        ) {
            return a == b;
        }
        (1..m)
            .filter(|u| u.gcd(&m) == 1)
            .any(|u| {
                self.generator
                    .entries()
                    .iter()
                    .zip(other.generator.entries())
                    .all(|(&a, &b)| mul_mod(u, a, m) == b)
            })
    }

    /// The same lattice in basis form: `v = m`, basis from the column
    /// Hermite form of the stacked generators `[m·I | y]`.
    pub fn to_general(&self) -> GeneralLattice {
        let d = self.dim;
        let mut stack = IntMat::zero(d, d + 1);
        for i in 0..d {
            stack.set(i, i, BigInt::from(self.modulus));
            stack.set(i, d, BigInt::from(self.generator[i]));
        }
        let h = stack.col_hnf().expect("generator stack has full row rank");
        let rows = h
            .to_i64_rows()
            .expect("HNF entries are bounded by the modulus");
        GeneralLattice::new(d, self.modulus as i64, rows)
            .expect("cyclic lattice always satisfies the d-lattice invariants")
    }

    /// Membership test for a rational point given as `numerators / denominator`.
    pub fn contains_rational(&self, numerators: &[i64], denominator: i64) -> bool {
        self.to_general().contains_rational(numerators, denominator)
    }
}

#[derive(Serialize, Deserialize)]
struct RawCyclic {
    dim: usize,
    #[serde(with = "crate::numstr::u64_string")]
    modulus: u64,
    y: Vec<i64>,
}

impl TryFrom<RawCyclic> for CyclicLattice {
    type Error = Error;
    fn try_from(raw: RawCyclic) -> Result<Self> {
        CyclicLattice::new(raw.dim, raw.modulus, raw.y)
    }
}

impl From<CyclicLattice> for RawCyclic {
    fn from(l: CyclicLattice) -> RawCyclic {
        RawCyclic {
            dim: l.dim,
            modulus: l.modulus,
            y: l.generator.0,
        }
    }
}

/// `(1/v)·Λ·Z^d` for an integer matrix Λ (columns generate), with
/// `Z^d ⊆ M ⊆ (1/v)Z^d` verified at construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawGeneral", into = "RawGeneral")]
pub struct GeneralLattice {
    dim: usize,
    denominator: i64,
    /// Row-major Λ.
    basis: Vec<Vec<i64>>,
}

impl GeneralLattice {
    pub fn new(dim: usize, denominator: i64, basis: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if denominator < 1 {
            return Err(Error::InvalidLattice("denominator must be positive".into()));
        }
        if basis.len() != dim || basis.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: basis.len(),
            });
        }
        let mat = IntMat::from_rows_i64(&basis);
        let det = mat.det_bareiss();
        if det.is_zero() {
            return Err(Error::InvalidLattice("basis is singular".into()));
        }
        // Z^d ⊆ M  ⇔  v·Λ^{-1} integral  ⇔  det | v·adj entrywise.
        let adj = mat.adjugate();
        let v = BigInt::from(denominator);
        for i in 0..dim {
            for j in 0..dim {
                if !(adj.get(i, j) * &v).mod_floor(&det).is_zero() {
                    return Err(Error::InvalidLattice(
                        "lattice does not contain Z^d (v·Λ^{-1} is not integral)".into(),
                    ));
                }
            }
        }
        let lattice = GeneralLattice {
            dim,
            denominator,
            basis,
        };
        // [M : Z^d] = v^d / |det Λ| is automatically a positive integer once
        // Z^d ⊆ M ⊆ (1/v)Z^d holds; keep the sanity check anyway.
        let vd = v.pow(dim as u32);
        debug_assert!(vd.mod_floor(&det.abs()).is_zero());
        Ok(lattice)
    }

    pub fn standard(dim: usize) -> Self {
        let mut basis = vec![vec![0i64; dim]; dim];
        for (i, row) in basis.iter_mut().enumerate() {
            row[i] = 1;
        }
        GeneralLattice::new(dim, 1, basis).expect("Z^d is a valid d-lattice")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn basis_rows(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn basis_mat(&self) -> IntMat {
        IntMat::from_rows_i64(&self.basis)
    }

    /// Group index `[M : Z^d] = v^d / |det Λ|`.
    pub fn index(&self) -> BigUint {
        let det = self.basis_mat().det_bareiss().abs();
        let vd = BigInt::from(self.denominator).pow(self.dim as u32);
        let (q, r) = vd.div_rem(&det);
        debug_assert!(r.is_zero());
        q.to_biguint().expect("index is positive")
    }

    pub fn index_u64(&self) -> Result<u64> {
        self.index()
            .to_u64()
            .ok_or_else(|| Error::CountOverflow("lattice index exceeds u64".into()))
    }

    /// Canonical basis of `v·M` (column HNF of Λ); equal lattices with equal
    /// denominators have equal canonical bases.
    pub fn canonical_scaled_basis(&self) -> IntMat {
        self.basis_mat()
            .col_hnf()
            .expect("basis is nonsingular by invariant")
    }

    /// Integer matrix `B⁻¹` for the canonical basis `B = Hm/v` of M. Its
    /// integrality is forced by `Z^d ⊆ M` and asserted; its columns are the
    /// images of the standard basis vectors under the map sending M to Z^d.
    pub fn inverse_basis_mat(&self) -> IntMat {
        crate::duality::inverse_of(&self.canonical_scaled_basis(), self.denominator)
    }

    /// Exact lattice equality, independent of basis presentation and of the
    /// (possibly non-minimal) denominators.
    pub fn same_lattice(&self, other: &GeneralLattice) -> bool {
        if self.dim != other.dim {
            return false;
        }
        // (1/v)ΛZ^d = (1/w)Λ'Z^d  ⇔  col_hnf(w·Λ) = col_hnf(v·Λ').
        let a = self
            .basis_mat()
            .scale(&BigInt::from(other.denominator))
            .col_hnf()
            .expect("nonsingular");
        let b = other
            .basis_mat()
            .scale(&BigInt::from(self.denominator))
            .col_hnf()
            .expect("nonsingular");
        a == b
    }

    /// Membership test for `numerators / denominator`: x ∈ M iff B^{-1}x is
    /// integral for a basis B = Λ/v, decided with adjugate arithmetic.
    pub fn contains_rational(&self, numerators: &[i64], denominator: i64) -> bool {
        assert_eq!(numerators.len(), self.dim, "dimension mismatch");
        assert!(denominator != 0);
        let mat = self.basis_mat();
        let det = mat.det_bareiss();
        let adj = mat.adjugate();
        // B^{-1} x = v·adj(Λ)/det(Λ) · num/den integral
        //   ⇔ det·den | v·(adj·num) entrywise.
        let nums: Vec<BigInt> = numerators.iter().map(|&x| BigInt::from(x)).collect();
        let scaled = adj.mul_vec(&nums);
        let modulus = (&det * BigInt::from(denominator)).abs();
        scaled
            .iter()
            .all(|e| (e * BigInt::from(self.denominator)).mod_floor(&modulus).is_zero())
    }

    /// Recover a cyclic presentation if the quotient `M/Z^d` is cyclic:
    /// scans the coset representatives for an element of full order.
    /// Returns `Ok(None)` for non-cyclic quotients.
    pub fn to_cyclic(&self, limits: &crate::limits::Limits) -> Result<Option<CyclicLattice>> {
        let index = self.index_u64()?;
        if index == 1 {
            return Ok(None);
        }
        for rep in crate::freecheck::coset_reps(self, limits)? {
            let v = rep.denominator;
            let g = rep
                .numerators
                .entries()
                .iter()
                .fold(v, |acc, &x| acc.gcd(&x));
            let order = (v / g) as u64;
            if order == index {
                // rep = nums/v generates the quotient; rescale to denominator
                // `index`: since v = g·index, y = nums·index/v = nums/g.
                let y: Vec<i64> = rep.numerators.entries().iter().map(|&x| x / g).collect();
                return Ok(Some(CyclicLattice::new(self.dim, index, y)?));
            }
        }
        Ok(None)
    }
}

#[derive(Serialize, Deserialize)]
struct RawGeneral {
    dim: usize,
    #[serde(with = "crate::numstr::i64_string")]
    denominator: i64,
    basis: Vec<Vec<i64>>,
}

impl TryFrom<RawGeneral> for GeneralLattice {
    type Error = Error;
    fn try_from(raw: RawGeneral) -> Result<Self> {
        GeneralLattice::new(raw.dim, raw.denominator, raw.basis)
    }
}

impl From<GeneralLattice> for RawGeneral {
    fn from(l: GeneralLattice) -> RawGeneral {
        RawGeneral {
            dim: l.dim,
            denominator: l.denominator,
            basis: l.basis,
        }
    }
}

/// Either lattice representation; most operations accept this.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lattice {
    Cyclic(CyclicLattice),
    General(GeneralLattice),
}

impl Lattice {
    pub fn dim(&self) -> usize {
        match self {
            Lattice::Cyclic(l) => l.dim(),
            Lattice::General(l) => l.dim(),
        }
    }

    pub fn index(&self) -> BigUint {
        match self {
            Lattice::Cyclic(l) => l.index(),
            Lattice::General(l) => l.index(),
        }
    }

    pub fn to_general(&self) -> GeneralLattice {
        match self {
            Lattice::Cyclic(l) => l.to_general(),
            Lattice::General(l) => l.clone(),
        }
    }

    pub fn contains_rational(&self, numerators: &[i64], denominator: i64) -> bool {
        match self {
            Lattice::Cyclic(l) => l.contains_rational(numerators, denominator),
            Lattice::General(l) => l.contains_rational(numerators, denominator),
        }
    }
}

impl From<CyclicLattice> for Lattice {
    fn from(l: CyclicLattice) -> Self {
        Lattice::Cyclic(l)
    }
}

impl From<GeneralLattice> for Lattice {
    fn from(l: GeneralLattice) -> Self {
        Lattice::General(l)
    }
}

pub(crate) fn mul_mod(a: i64, b: i64, m: i64) -> i64 {
    debug_assert!(m > 0);
    let r = (a as i128 * b as i128).rem_euclid(m as i128);
    r as i64
}

/// Inverse of `a` modulo `m`, when gcd(a, m) = 1.
pub(crate) fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let e = i64::extended_gcd(&a.rem_euclid(m), &m);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_reduces_and_validates() {
        let l = CyclicLattice::new(3, 5, vec![6, -3, 13]).unwrap();
        assert_eq!(l.generator().entries(), &[1, 2, 3]);
        assert!(CyclicLattice::new(3, 5, vec![5, 10, 0]).is_err()); // zero mod m
        assert!(CyclicLattice::new(2, 4, vec![2, 2]).is_err()); // order 2, not 4
        assert!(CyclicLattice::new(2, 4, vec![2, 1]).is_ok()); // order exactly 4
        assert!(CyclicLattice::new(2, 1, vec![0, 0]).is_err());
        assert!(CyclicLattice::new(0, 5, vec![]).is_err());
        assert!(CyclicLattice::new(2, 5, vec![1]).is_err());
    }

    #[test]
    fn canonical_prime_generator_scales_leading_entry() {
        let l = CyclicLattice::new(3, 5, vec![2, 1, 3]).unwrap();
        // 2^{-1} mod 5 = 3 → (1, 3, 9 mod 5 = 4)
        assert_eq!(
            l.canonical_prime_generator().unwrap().entries(),
            &[1, 3, 4]
        );
    }

    #[test]
    fn same_lattice_for_scalar_multiples() {
        let a = CyclicLattice::new(3, 5, vec![1, 2, 3]).unwrap();
        let b = CyclicLattice::new(3, 5, vec![2, 4, 6]).unwrap();
        let c = CyclicLattice::new(3, 5, vec![1, 1, 1]).unwrap();
        assert!(a.same_lattice(&b));
        assert!(!a.same_lattice(&c));
        // composite modulus path
        let d = CyclicLattice::new(2, 4, vec![2, 1]).unwrap();
        let e = CyclicLattice::new(2, 4, vec![6, 3]).unwrap();
        assert!(d.same_lattice(&e));
    }

    #[test]
    fn general_lattice_invariants() {
        // (1/2)·2I·Z^2 = Z^2 and (1/2)·I·Z^2 = (1/2)Z^2 both contain Z^2.
        assert!(GeneralLattice::new(2, 2, vec![vec![2, 0], vec![0, 2]]).is_ok());
        assert!(GeneralLattice::new(2, 2, vec![vec![1, 0], vec![0, 1]]).is_ok());
        // (1/2)·diag(3, 1)·Z^2 misses e_1.
        assert!(GeneralLattice::new(2, 2, vec![vec![3, 0], vec![0, 1]]).is_err());
        assert!(GeneralLattice::new(2, 1, vec![vec![1, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn index_of_cyclic_and_general_forms_agree() {
        let l = CyclicLattice::new(3, 5, vec![1, 2, 3]).unwrap();
        let g = l.to_general();
        assert_eq!(l.index(), g.index());
        assert_eq!(g.index().to_u64(), Some(5));
        assert_eq!(GeneralLattice::standard(4).index().to_u64(), Some(1));
    }

    #[test]
    fn membership_of_generator_point() {
        let l = CyclicLattice::new(3, 5, vec![1, 2, 3]).unwrap();
        assert!(l.contains_rational(&[1, 2, 3], 5));
        assert!(l.contains_rational(&[2, 4, 6], 5)); // 2y/5
        assert!(l.contains_rational(&[1, 2, -2], 5)); // y/5 - e_3
        assert!(!l.contains_rational(&[1, 0, 0], 5));
        assert!(l.contains_rational(&[1, 1, 1], 1)); // Z^d ⊆ M
    }

    #[test]
    fn same_lattice_across_presentations() {
        let l = CyclicLattice::new(2, 3, vec![1, 1]).unwrap();
        let g = l.to_general();
        let g2 = GeneralLattice::new(2, 3, vec![vec![1, 2], vec![1, -1]]).unwrap();
        // Columns (1,1)/3 and (2,-1)/3 ≡ (2,2)/3 mod Z^2 generate the same
        // quotient as (1,1)/3.
        assert!(g.same_lattice(&g2));
        let other = CyclicLattice::new(2, 3, vec![1, 2]).unwrap().to_general();
        assert!(!g.same_lattice(&other));
    }
}
