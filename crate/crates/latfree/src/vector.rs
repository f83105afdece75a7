//! Integer vectors and the two norms used throughout: the sup norm and the
//! width norm `|x| = max(0, max_i x_i) - min(0, min_i x_i)`.
//!
//! The width norm is the support-function norm of the difference body of the
//! standard simplex; the width of a lattice is the length of its shortest
//! nonzero dual vector in this norm.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Index;

/// A vector of machine-width signed integers. Houses lattice points,
/// covectors, and cyclic-lattice generators alike.
///
/// Entries are `i64` on purpose: search hot loops must not pay bignum cost.
/// The one place where magnitudes outgrow machine range (the planner) uses
/// arbitrary precision separately.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn new(entries: Vec<i64>) -> Self {
        IntVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![0; dim])
    }

    /// Standard basis vector `e_i` (0-based index).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        IntVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `sup_i |x_i|`.
    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|&x| x.abs()).max().unwrap_or(0)
    }

    /// The width norm `max(0, max_i x_i) - min(0, min_i x_i)`.
    pub fn width_norm(&self) -> i64 {
        width_norm(&self.0)
    }

    pub fn dot(&self, other: &IntVector) -> i128 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum()
    }

    pub fn negated(&self) -> IntVector {
        IntVector(self.0.iter().map(|&x| -x).collect())
    }

    /// Sign-canonical representative of `{x, -x}`: the one whose first
    /// nonzero entry is positive. The zero vector is its own representative.
    pub fn sign_canonical(&self) -> IntVector {
        match self.0.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => self.negated(),
            _ => self.clone(),
        }
    }

    /// Colexicographic comparison: entries compared from the last coordinate
    /// backwards. This is the deterministic tie-break order for width
    /// minimizers; it ranks `e_1` before `e_d`.
    pub fn colex_cmp(&self, other: &IntVector) -> std::cmp::Ordering {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// Width norm on a raw slice; hot-path form of [`IntVector::width_norm`].
pub fn width_norm(entries: &[i64]) -> i64 {
    let mut hi: i64 = 0;
    let mut lo: i64 = 0;
    for &x in entries {
        if x > hi {
            hi = x;
        }
        if x < lo {
            lo = x;
        }
    }
    hi - lo
}

/// `sup_i |x_i|` on a raw slice.
pub fn sup_norm(entries: &[i64]) -> i64 {
    entries.iter().map(|&x| x.abs()).max().unwrap_or(0)
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

impl From<&[i64]> for IntVector {
    fn from(v: &[i64]) -> Self {
        IntVector(v.to_vec())
    }
}

impl Index<usize> for IntVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl<'a> IntoIterator for &'a IntVector {
    type Item = &'a i64;
    type IntoIter = std::slice::Iter<'a, i64>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_norm_examples() {
        assert_eq!(IntVector::new(vec![1, -1]).width_norm(), 2);
        assert_eq!(IntVector::new(vec![0, 0, 0]).width_norm(), 0);
        assert_eq!(IntVector::new(vec![2, 3, 1]).width_norm(), 3);
    }

    #[test]
    fn sup_norm_examples() {
        assert_eq!(IntVector::new(vec![1, -1]).sup_norm(), 1);
        assert_eq!(IntVector::new(vec![0]).sup_norm(), 0);
        assert_eq!(IntVector::new(vec![-4, 2]).sup_norm(), 4);
    }

    #[test]
    fn one_dimensional_width_norm_is_abs() {
        for x in -20..=20i64 {
            assert_eq!(IntVector::new(vec![x]).width_norm(), x.abs());
        }
    }

    #[test]
    fn sign_canonical_picks_positive_leading_entry() {
        let v = IntVector::new(vec![0, -2, 1]);
        assert_eq!(v.sign_canonical(), IntVector::new(vec![0, 2, -1]));
        let w = IntVector::new(vec![0, 2, -1]);
        assert_eq!(w.sign_canonical(), w);
        let z = IntVector::zeros(3);
        assert_eq!(z.sign_canonical(), z);
    }

    #[test]
    fn colex_ranks_e1_first() {
        let d = 4;
        let e1 = IntVector::unit(d, 0);
        let e4 = IntVector::unit(d, 3);
        assert_eq!(e1.colex_cmp(&e4), std::cmp::Ordering::Less);
    }
}
