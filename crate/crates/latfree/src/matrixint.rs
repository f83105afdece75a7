//! Small dense integer matrices in arbitrary precision: fraction-free
//! (Bareiss) determinants, adjugates, and column/row Hermite normal forms.
//! Dimensions here are tiny (the ambient dimension d), so clarity and
//! exactness win over asymptotics.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMat { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = IntMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        IntMat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigInt::zero();
            for t in 0..self.cols {
                acc += self.get(i, t) * other.get(t, j);
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    acc += self.get(i, j) * x;
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &BigInt) -> IntMat {
        IntMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn neg(&self) -> IntMat {
        IntMat::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(i64::try_from(self.get(i, j)).ok()?);
            }
            out.push(row);
        }
        Some(out)
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det_bareiss(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[idx(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(idx(k, j), idx(swap, j));
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)];
                    let (q, r) = t.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    a[idx(i, j)] = q;
                }
            }
            prev = a[idx(k, k)].clone();
        }
        let det = a[idx(n - 1, n - 1)].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Adjugate matrix: `A * adj(A) = det(A) * I`. Cofactor expansion; fine
    /// for the ambient dimensions in play.
    pub fn adjugate(&self) -> IntMat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 1 {
            return IntMat::identity(1);
        }
        IntMat::from_fn(n, n, |i, j| {
            // adj[i][j] = (-1)^(i+j) * minor(j, i)
            let minor = IntMat::from_fn(n - 1, n - 1, |r, c| {
                let rr = if r < j { r } else { r + 1 };
                let cc = if c < i { c } else { c + 1 };
                self.get(rr, cc).clone()
            });
            let m = minor.det_bareiss();
            if (i + j) % 2 == 0 {
                m
            } else {
                -m
            }
        })
    }

    /// Column Hermite normal form of a full-row-rank matrix (`rows <= cols`):
    /// unimodular column operations bring the matrix to `[H | 0]` with `H`
    /// square lower-triangular, positive diagonal, and the entries left of
    /// each diagonal reduced into `[0, diag)`. Returns `H`.
    pub fn col_hnf(&self) -> Result<IntMat> {
        let d = self.rows;
        let n = self.cols;
        if d > n {
            return Err(Error::InvalidInput(
                "column HNF needs at least as many columns as rows".into(),
            ));
        }
        let mut a = self.clone();
        let swap_cols = |a: &mut IntMat, j0: usize, j1: usize| {
            for i in 0..d {
                let x = a.get(i, j0).clone();
                let y = a.get(i, j1).clone();
                a.set(i, j0, y);
                a.set(i, j1, x);
            }
        };
        // col_j -= q * col_i
        let sub_col = |a: &mut IntMat, j: usize, q: &BigInt, i: usize| {
            if q.is_zero() {
                return;
            }
            for r in 0..d {
                let v = a.get(r, j) - q * a.get(r, i);
                a.set(r, j, v);
            }
        };
        for i in 0..d {
            loop {
                // Pick the nonzero pivot of least magnitude in row i at
                // columns >= i; gcd-reduce the others against it.
                let mut pivot: Option<usize> = None;
                for j in i..n {
                    if a.get(i, j).is_zero() {
                        continue;
                    }
                    match pivot {
                        None => pivot = Some(j),
                        Some(pj) => {
                            if a.get(i, j).abs() < a.get(i, pj).abs() {
                                pivot = Some(j);
                            }
                        }
                    }
                }
                let Some(pj) = pivot else {
                    return Err(Error::InvalidInput(
                        "column HNF input does not have full row rank".into(),
                    ));
                };
                if pj != i {
                    swap_cols(&mut a, i, pj);
                }
                let mut reduced_any = false;
                for j in i + 1..n {
                    if a.get(i, j).is_zero() {
                        continue;
                    }
                    let q = a.get(i, j) / a.get(i, i);
                    sub_col(&mut a, j, &q, i);
                    if !a.get(i, j).is_zero() {
                        reduced_any = true;
                    }
                }
                if !reduced_any {
                    break;
                }
            }
            if a.get(i, i).is_negative() {
                for r in 0..d {
                    let v = -a.get(r, i);
                    a.set(r, i, v);
                }
            }
            // Reduce the entries left of the diagonal into [0, diag).
            for j in 0..i {
                let q = a.get(i, j).div_floor(a.get(i, i));
                sub_col(&mut a, j, &q, i);
            }
        }
        Ok(IntMat::from_fn(d, d, |i, j| a.get(i, j).clone()))
    }

    /// Row Hermite normal form (left-unimodular): upper-triangular, positive
    /// diagonal, entries above each diagonal reduced into `[0, diag)`.
    pub fn row_hnf(&self) -> Result<IntMat> {
        Ok(self.transpose().col_hnf()?.transpose())
    }
}

/// A rational matrix held as an integer matrix over a positive common
/// denominator. Products are formed without reduction; exactness checks
/// compare `num == den * I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    pub num: IntMat,
    pub den: BigInt,
}

impl RatMat {
    pub fn new(num: IntMat, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            RatMat {
                num: num.neg(),
                den: -den,
            }
        } else {
            RatMat { num, den }
        }
    }

    pub fn from_int(num: IntMat) -> Self {
        RatMat {
            num,
            den: BigInt::one(),
        }
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        RatMat::new(self.num.mul(&other.num), &self.den * &other.den)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.num.rows();
        if n != self.num.cols() {
            return false;
        }
        (0..n).all(|i| {
            (0..n).all(|j| {
                if i == j {
                    *self.num.get(i, j) == self.den
                } else {
                    self.num.get(i, j).is_zero()
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    /// Naive cofactor determinant as an independent oracle.
    fn det_naive(a: &IntMat) -> BigInt {
        let n = a.rows();
        if n == 1 {
            return a.get(0, 0).clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let minor = IntMat::from_fn(n - 1, n - 1, |r, c| {
                let cc = if c < j { c } else { c + 1 };
                a.get(r + 1, cc).clone()
            });
            let term = a.get(0, j) * det_naive(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn lcg_iter(seed: u64) -> impl FnMut() -> i64 {
        let mut s = seed;
        move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) as i64 % 9) - 4
        }
    }

    #[test]
    fn bareiss_matches_naive_on_random_matrices() {
        let mut next = lcg_iter(7);
        for n in 1..=5usize {
            for _ in 0..40 {
                let a = IntMat::from_fn(n, n, |_, _| BigInt::from(next()));
                assert_eq!(a.det_bareiss(), det_naive(&a));
            }
        }
    }

    #[test]
    fn adjugate_identity_property() {
        let mut next = lcg_iter(99);
        for n in 1..=5usize {
            for _ in 0..25 {
                let a = IntMat::from_fn(n, n, |_, _| BigInt::from(next()));
                let det = a.det_bareiss();
                let prod = a.mul(&a.adjugate());
                for i in 0..n {
                    for j in 0..n {
                        let want = if i == j { det.clone() } else { BigInt::zero() };
                        assert_eq!(*prod.get(i, j), want);
                    }
                }
            }
        }
    }

    #[test]
    fn col_hnf_shape_and_lattice_preservation() {
        let a = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let h = a.col_hnf().unwrap();
        let n = h.rows();
        // Lower triangular, positive diagonal, reduced off-diagonals.
        for i in 0..n {
            assert!(h.get(i, i).is_positive());
            for j in i + 1..n {
                assert!(h.get(i, j).is_zero());
            }
            for j in 0..i {
                assert!(!h.get(i, j).is_negative());
                assert!(h.get(i, j) < h.get(i, i));
            }
        }
        // Same lattice: det magnitudes agree and each column of a is in H Z^d.
        assert_eq!(h.det_bareiss().abs(), a.det_bareiss().abs());
        let det = h.det_bareiss();
        let adj = h.adjugate();
        for j in 0..a.cols() {
            let col = a.column(j);
            let scaled = adj.mul_vec(&col);
            for v in scaled {
                assert!((v % &det).is_zero());
            }
        }
    }

    #[test]
    fn col_hnf_rectangular_drops_dependent_columns() {
        // [5 I | y] for y = (1, 2, 3): generates (1/5-scaled) the cyclic
        // lattice stack; H must have determinant 5^2 = 25 here (d = 3,
        // modulus 5: det = m^(d-1) since the quotient is cyclic of order m).
        let a = mat(&[&[5, 0, 0, 1], &[0, 5, 0, 2], &[0, 0, 5, 3]]);
        let h = a.col_hnf().unwrap();
        assert_eq!(h.det_bareiss(), BigInt::from(25));
    }

    #[test]
    fn col_hnf_is_canonical_for_equal_lattices() {
        // Post-multiplying by a unimodular matrix leaves the column lattice
        // unchanged, so the HNF must be identical.
        let a = mat(&[&[3, 1, 0], &[0, 2, 5], &[1, 1, 4]]);
        let u = mat(&[&[1, 4, -3], &[0, 1, 2], &[0, 0, -1]]);
        assert_eq!(u.det_bareiss().abs(), BigInt::one());
        let h1 = a.col_hnf().unwrap();
        let h2 = a.mul(&u).col_hnf().unwrap();
        assert_eq!(h1, h2);
    }

    #[test]
    fn rank_deficient_input_is_rejected() {
        let a = mat(&[&[1, 2], &[2, 4]]);
        assert!(a.col_hnf().is_err());
    }

    #[test]
    fn ratmat_identity_check() {
        let a = mat(&[&[0, -1], &[1, 3]]);
        let inv = RatMat::new(a.adjugate(), a.det_bareiss());
        assert!(RatMat::from_int(a).mul(&inv).is_identity());
    }
}
