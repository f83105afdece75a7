//! Verifiable outputs of the two core predicates: width certificates (a
//! shortest dual covector) and freeness certificates (a witness point when a
//! lattice meets the open standard simplex).

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::simplex::Simplex;
use crate::vector::IntVector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Free,
    NotFree,
}

/// A rational point `numerators / denominator` with a fixed positive
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPoint {
    pub numerators: IntVector,
    #[serde(with = "crate::numstr::i64_string")]
    pub denominator: i64,
}

impl RationalPoint {
    /// Sum of coordinates compared against 1, exactly.
    pub fn coordinate_sum_at_most_one(&self) -> bool {
        let sum: i128 = self.numerators.entries().iter().map(|&x| x as i128).sum();
        sum <= self.denominator as i128
    }

    /// All coordinates within `[0, 1]`.
    pub fn in_unit_box(&self) -> bool {
        self.numerators
            .entries()
            .iter()
            .all(|&x| 0 <= x && x <= self.denominator)
    }

    /// Whether the point is a vertex of the standard simplex (0 or some e_i).
    pub fn is_simplex_vertex(&self) -> bool {
        let nz: Vec<i64> = self
            .numerators
            .entries()
            .iter()
            .copied()
            .filter(|&x| x != 0)
            .collect();
        nz.is_empty() || (nz.len() == 1 && nz[0] == self.denominator)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessCertificate {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<RationalPoint>,
}

impl FreenessCertificate {
    pub fn free() -> Self {
        FreenessCertificate {
            verdict: Verdict::Free,
            witness: None,
        }
    }

    pub fn not_free(witness: RationalPoint) -> Self {
        FreenessCertificate {
            verdict: Verdict::NotFree,
            witness: Some(witness),
        }
    }

    pub fn is_free(&self) -> bool {
        self.verdict == Verdict::Free
    }

    /// Re-verify the witness against the lattice it certifies: it must lie
    /// in the closed standard simplex, not be a vertex, and belong to M.
    pub fn verify(&self, lattice: &Lattice) -> Result<()> {
        match (self.verdict, &self.witness) {
            (Verdict::Free, None) => Ok(()),
            (Verdict::Free, Some(_)) => Err(Error::VerificationFailed(
                "free verdict must not carry a witness".into(),
            )),
            (Verdict::NotFree, None) => Err(Error::VerificationFailed(
                "not-free verdict requires a witness".into(),
            )),
            (Verdict::NotFree, Some(w)) => {
                if w.numerators.dim() != lattice.dim() {
                    return Err(Error::VerificationFailed("witness dimension mismatch".into()));
                }
                if !w.in_unit_box() {
                    return Err(Error::VerificationFailed(
                        "witness has a coordinate outside [0, 1]".into(),
                    ));
                }
                if !w.coordinate_sum_at_most_one() {
                    return Err(Error::VerificationFailed(
                        "witness coordinate sum exceeds 1".into(),
                    ));
                }
                if w.is_simplex_vertex() {
                    return Err(Error::VerificationFailed(
                        "witness is a vertex of the standard simplex".into(),
                    ));
                }
                if !lattice.contains_rational(w.numerators.entries(), w.denominator) {
                    return Err(Error::VerificationFailed(
                        "witness does not belong to the lattice".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// What a width certificate talks about. For lattices the minimizer is a
/// dual covector ξ; for simplices it is the covector u transported to the
/// simplex side.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "object", rename_all = "kebab-case")]
pub enum WidthScope {
    CyclicLattice(crate::lattice::CyclicLattice),
    GeneralLattice(crate::lattice::GeneralLattice),
    Simplex(Simplex),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WidthCertificate {
    pub width: i64,
    pub minimizer: IntVector,
    pub scope: WidthScope,
}
