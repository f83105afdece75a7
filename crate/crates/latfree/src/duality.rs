//! The inside-out correspondence between integral simplices and d-lattices.
//!
//! A simplex σ with vertex differences A corresponds to the lattice
//! M = A⁻¹·Z^d (which contains Z^d); conversely a d-lattice M with basis B
//! corresponds to the simplex with vertices 0 and the columns of B⁻¹. The
//! group index [M : Z^d] equals d!·vol(σ) throughout. Freeness and width are
//! invariant under the correspondence.

use crate::error::{Error, Result};
use crate::lattice::{GeneralLattice, Lattice};
use crate::matrixint::{IntMat, RatMat};
use crate::simplex::Simplex;
use crate::vector::IntVector;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// The exact rational change of coordinates backing a conversion.
/// `forward` maps the simplex onto the standard simplex; `inverse` maps it
/// back. The product is checked to be the identity, exactly.
#[derive(Debug, Clone)]
pub struct TransformRecord {
    pub forward: RatMat,
    pub inverse: RatMat,
    pub base_vertex: IntVector,
}

impl TransformRecord {
    fn new(forward: RatMat, inverse: RatMat, base_vertex: IntVector) -> Self {
        assert!(
            forward.mul(&inverse).is_identity(),
            "transform and inverse must compose to the identity"
        );
        TransformRecord {
            forward,
            inverse,
            base_vertex,
        }
    }
}

/// Simplex → d-lattice: with A the vertex-difference matrix, the lattice is
/// A⁻¹·Z^d presented over denominator |det A|; its index is |det A| = d!·vol.
pub fn lattice_from_simplex(s: &Simplex) -> Result<(GeneralLattice, TransformRecord)> {
    let d = s.dim();
    let a = s.vertex_diff_matrix();
    let det = a.det_bareiss();
    if det.is_zero() {
        return Err(Error::DegenerateSimplex);
    }
    let adj = a.adjugate();
    // (1/v)·Λ = adj(A)/det(A) = A⁻¹ with v = |det A| > 0.
    let (lambda, v) = if det.is_negative() {
        (adj.neg(), -det.clone())
    } else {
        (adj.clone(), det.clone())
    };
    let v_i64 = v
        .to_i64()
        .ok_or_else(|| Error::CountOverflow("simplex volume exceeds machine range".into()))?;
    let rows = lambda.to_i64_rows().ok_or_else(|| {
        Error::CountOverflow("lattice basis entries exceed machine range".into())
    })?;
    let lattice = GeneralLattice::new(d, v_i64, rows)?;
    debug_assert_eq!(
        lattice.index(),
        v.to_biguint().expect("positive determinant")
    );

    let record = TransformRecord::new(
        RatMat::new(adj, det),
        RatMat::from_int(a),
        s.base_vertex().clone(),
    );
    Ok((lattice, record))
}

/// d-lattice → simplex: take the canonical basis B of M, invert it (integral
/// because Z^d ⊆ M), and canonicalize by a left-unimodular row Hermite form
/// so equal lattices yield identical simplices. The returned simplex has
/// vertex 0 first and d!·vol equal to the index of M.
pub fn simplex_from_lattice(lattice: &Lattice) -> Result<(Simplex, TransformRecord)> {
    let general = lattice.to_general();
    let d = general.dim();
    let c = general.inverse_basis_mat();
    let h = c.row_hnf()?;

    let mut vertices = vec![IntVector::zeros(d)];
    let h_rows = h
        .to_i64_rows()
        .ok_or_else(|| Error::CountOverflow("simplex vertices exceed machine range".into()))?;
    for j in 0..d {
        vertices.push(IntVector::new((0..d).map(|i| h_rows[i][j]).collect()));
    }
    let simplex = Simplex::new(d, vertices)?;
    debug_assert_eq!(
        simplex.normalized_volume().to_biguint().unwrap(),
        lattice.index()
    );

    let record = TransformRecord::new(
        RatMat::new(h.adjugate(), h.det_bareiss()),
        RatMat::from_int(h),
        IntVector::zeros(d),
    );
    Ok((simplex, record))
}

/// Group index `[M : Z^d]`; for cyclic lattices this is the modulus, and it
/// always equals d!·vol of the corresponding simplex.
pub fn index(lattice: &Lattice) -> BigUint {
    lattice.index()
}

/// Shared helper: inverse of the canonical basis as an integer matrix,
/// asserting integrality (forced by Z^d ⊆ M).
pub(crate) fn inverse_of(hm: &IntMat, v: i64) -> IntMat {
    let det = hm.det_bareiss();
    let adj = hm.adjugate();
    IntMat::from_fn(hm.rows(), hm.cols(), |i, j| {
        let num = adj.get(i, j) * BigInt::from(v);
        let (q, r) = num.div_rem(&det);
        assert!(
            r.is_zero(),
            "inverse basis must be integral for a d-lattice"
        );
        q
    })
}
