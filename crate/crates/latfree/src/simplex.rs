//! Full-dimensional integral simplices: d+1 integer vertices whose
//! difference vectors are linearly independent.

use crate::error::{Error, Result};
use crate::matrixint::IntMat;
use crate::vector::IntVector;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSimplex", into = "RawSimplex")]
pub struct Simplex {
    dim: usize,
    vertices: Vec<IntVector>,
}

impl Simplex {
    pub fn new(dim: usize, vertices: Vec<IntVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if vertices.len() != dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: dim + 1,
                got: vertices.len(),
            });
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.dim(),
                });
            }
        }
        let s = Simplex { dim, vertices };
        if s.vertex_diff_matrix().det_bareiss().is_zero() {
            return Err(Error::DegenerateSimplex);
        }
        Ok(s)
    }

    /// The standard simplex `σ_d` with vertices 0, e_1, ..., e_d.
    pub fn standard(dim: usize) -> Self {
        let mut vertices = vec![IntVector::zeros(dim)];
        for i in 0..dim {
            vertices.push(IntVector::unit(dim, i));
        }
        Simplex::new(dim, vertices).expect("standard simplex is nondegenerate")
    }

    /// Scarf's five-dimensional example: vertices at the origin, the first
    /// four basis vectors, and (23, 39, 31, 43, 57).
    pub fn scarf() -> Self {
        let mut vertices = vec![IntVector::zeros(5)];
        for i in 0..4 {
            vertices.push(IntVector::unit(5, i));
        }
        vertices.push(IntVector::new(vec![23, 39, 31, 43, 57]));
        Simplex::new(5, vertices).expect("Scarf simplex is nondegenerate")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn base_vertex(&self) -> &IntVector {
        &self.vertices[0]
    }

    /// Columns `v_i - v_0` for i = 1..d.
    pub fn vertex_diff_matrix(&self) -> IntMat {
        let d = self.dim;
        IntMat::from_fn(d, d, |i, j| {
            BigInt::from(self.vertices[j + 1][i] - self.vertices[0][i])
        })
    }

    /// `d! · vol`, the absolute determinant of the difference matrix.
    pub fn normalized_volume(&self) -> BigInt {
        self.vertex_diff_matrix().det_bareiss().abs()
    }

    /// Dilation by a positive integer factor.
    pub fn dilate(&self, t: i64) -> Result<Simplex> {
        if t < 1 {
            return Err(Error::InvalidInput("dilation factor must be positive".into()));
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| IntVector::new(v.entries().iter().map(|&x| x * t).collect()))
            .collect();
        Simplex::new(self.dim, vertices)
    }

    /// Spread of the linear functional `u` over the vertices:
    /// `max_i <u, v_i> - min_i <u, v_i>`.
    pub fn spread(&self, u: &IntVector) -> i128 {
        let dots: Vec<i128> = self.vertices.iter().map(|v| v.dot(u)).collect();
        let hi = dots.iter().max().copied().unwrap_or(0);
        let lo = dots.iter().min().copied().unwrap_or(0);
        hi - lo
    }
}

#[derive(Serialize, Deserialize)]
struct RawSimplex {
    dim: usize,
    vertices: Vec<Vec<i64>>,
}

impl TryFrom<RawSimplex> for Simplex {
    type Error = Error;
    fn try_from(raw: RawSimplex) -> Result<Self> {
        Simplex::new(raw.dim, raw.vertices.into_iter().map(IntVector::new).collect())
    }
}

impl From<Simplex> for RawSimplex {
    fn from(s: Simplex) -> RawSimplex {
        RawSimplex {
            dim: s.dim,
            vertices: s.vertices.into_iter().map(|v| v.0).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn standard_simplex_has_unit_normalized_volume() {
        for d in 1..=5 {
            assert_eq!(Simplex::standard(d).normalized_volume().to_i64(), Some(1));
        }
    }

    #[test]
    fn scarf_normalized_volume_is_57() {
        assert_eq!(Simplex::scarf().normalized_volume().to_i64(), Some(57));
    }

    #[test]
    fn degenerate_vertices_rejected() {
        let flat = Simplex::new(
            2,
            vec![
                IntVector::new(vec![0, 0]),
                IntVector::new(vec![1, 1]),
                IntVector::new(vec![2, 2]),
            ],
        );
        assert!(matches!(flat, Err(Error::DegenerateSimplex)));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let s = Simplex::scarf();
        let text = serde_json::to_string(&s).unwrap();
        let back: Simplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"dim": 2, "vertices": [[0,0],[1,1],[2,2]]}"#;
        assert!(serde_json::from_str::<Simplex>(bad).is_err());
    }
}
