//! Fraction-free exact linear algebra over [`Scalar`].

use std::cmp::Ordering;

use crate::error::{PgError, Result};
use crate::scalar::{Ring, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Matrix { ring: ring.clone(), rows, cols, data: vec![Scalar::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for k in 0..n {
            m.set(k, k, Scalar::one(ring));
        }
        m
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Entrywise conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(PgError::LengthMismatch { expected: self.cols, found: other.rows });
        }
        self.ring.ensure_same(&other.ring)?;
        let mut out = Matrix::zeros(&self.ring, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + &(a * b);
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { data: self.data.iter().map(|x| x * s).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(PgError::LengthMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        Ok(Matrix { data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(), ..self.clone() })
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(&self.ring), |acc, k| acc + self.get(k, k))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| {
                let v = self.get(r, c);
                if r == c { v.is_one() } else { v.is_zero() }
            }))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    /// Submatrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ring, rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(PgError::LengthMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one(&self.ring));
        }
        let mut a = self.clone();
        let mut prev = Scalar::one(&self.ring);
        let mut negate = false;
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
                return Ok(Scalar::zero(&self.ring));
            };
            if p != k {
                a.swap_rows(p, k);
                negate = !negate;
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                let aik = a.get(i, k).clone();
                for j in k + 1..n {
                    let num = &(&pivot * a.get(i, j)) - &(&aik * a.get(k, j));
                    a.set(i, j, num.div_exact(&prev)?);
                }
                a.set(i, k, Scalar::zero(&self.ring));
            }
            prev = pivot;
        }
        let d = a.get(n - 1, n - 1).clone();
        Ok(if negate { -d } else { d })
    }

    /// Fraction-free Gauss-Jordan elimination of `[M | I]`.
    ///
    /// Returns `(det M, adj M)` with `adj M = det M * M^{-1}`.
    pub fn adjugate(&self) -> Result<(Scalar, Matrix)> {
        if !self.is_square() {
            return Err(PgError::LengthMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let ring = &self.ring;
        let mut a = Matrix::zeros(ring, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                a.set(r, c, self.get(r, c).clone());
            }
            a.set(r, n + r, Scalar::one(ring));
        }
        let mut prev = Scalar::one(ring);
        let mut negate = false;
        for k in 0..n {
            let p = (k..n).find(|&r| !a.get(r, k).is_zero()).ok_or(PgError::SingularMatrix)?;
            if p != k {
                a.swap_rows(p, k);
                negate = !negate;
            }
            let pivot = a.get(k, k).clone();
            for i in (0..n).filter(|&i| i != k) {
                let aik = a.get(i, k).clone();
                for j in (0..2 * n).filter(|&j| j != k) {
                    let num = &(&pivot * a.get(i, j)) - &(&aik * a.get(k, j));
                    a.set(i, j, if num.is_zero() { num } else { num.div_exact(&prev)? });
                }
                a.set(i, k, Scalar::zero(ring));
            }
            prev = pivot;
        }
        // now a = [d I | d M^{-1}] with d = +-det M
        let d = prev;
        let adj = Matrix::from_fn(ring, n, n, |r, c| a.get(r, n + c).clone());
        Ok(if negate { (-&d, adj.scale(&-Scalar::one(ring))) } else { (d, adj) })
    }

    /// Exact inverse; the entries must be Laurent polynomials.
    pub fn inverse(&self) -> Result<Matrix> {
        let (d, adj) = self.adjugate()?;
        let data = adj.data.iter().map(|x| x.div_exact(&d)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { data, ..adj })
    }

    /// Rank by fraction-free row reduction.
    pub fn rank(&self) -> Result<usize> {
        let mut a = self.clone();
        let mut prev = Scalar::one(&self.ring);
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a.get(r, c).is_zero()) else { continue };
            a.swap_rows(p, rank);
            let pivot = a.get(rank, c).clone();
            for i in rank + 1..self.rows {
                let aic = a.get(i, c).clone();
                for j in c + 1..self.cols {
                    let num = &(&pivot * a.get(i, j)) - &(&aic * a.get(rank, j));
                    a.set(i, j, num.div_exact(&prev)?);
                }
                a.set(i, c, Scalar::zero(&self.ring));
            }
            prev = pivot;
            rank += 1;
        }
        Ok(rank)
    }

    /// Positive semidefiniteness of a Hermitian matrix with constant
    /// entries: every principal minor must be nonnegative.
    pub fn is_psd(&self) -> Result<bool> {
        if !self.is_hermitian() {
            return Err(PgError::Unsupported("PSD test needs a Hermitian matrix".into()));
        }
        let n = self.rows;
        for mask in 1u32..(1u32 << n) {
            let idx: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
            if self.select(&idx, &idx).det()?.real_sign()? == Ordering::Less {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::WeightSpec;
    use crate::scalar::{GaussianRational, QMode};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring() -> Ring {
        Ring::new(QMode::Symbolic, WeightSpec::ones(3).unwrap()).unwrap()
    }

    fn ints(r: &Ring, rows: &[&[i64]]) -> Matrix {
        Matrix::from_fn(r, rows.len(), rows[0].len(), |i, j| Scalar::from_int(r, rows[i][j]))
    }

    /// Cofactor expansion, the textbook oracle.
    fn laplace(m: &Matrix) -> Scalar {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = Scalar::zero(m.ring());
        for c in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&k| k != c).collect();
            let term = m.get(0, c) * &laplace(&m.select(&rows, &cols));
            acc = if c % 2 == 0 { acc + &term } else { acc - &term };
        }
        acc
    }

    #[test]
    fn small_determinants() {
        let r = ring();
        assert_eq!(ints(&r, &[&[0, 1], &[1, 0]]).det().unwrap(), Scalar::from_int(&r, -1));
        assert_eq!(ints(&r, &[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).det().unwrap(), Scalar::from_int(&r, 6));
        assert!(ints(&r, &[&[1, 2], &[2, 4]]).det().unwrap().is_zero());
        assert_eq!(ints(&r, &[&[1, 2], &[2, 4]]).rank().unwrap(), 1);
    }

    #[test]
    fn symbolic_hankel() {
        let r = Ring::symbolic(3).unwrap();
        let w = |n| Scalar::weight(&r, n);
        let z = Scalar::zero(&r);
        // anti-triangular: det = -w2^3
        let m = Matrix::from_fn(&r, 3, 3, |i, j| if i + j < 3 { w(i + j) } else { z.clone() });
        assert_eq!(m.det().unwrap(), -Scalar::weight_pow(&r, 2, 3));
        assert_eq!(laplace(&m), m.det().unwrap());
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&m).unwrap().is_identity());
    }

    #[test]
    fn psd_examples() {
        let r = ring();
        assert!(ints(&r, &[&[1, 0], &[0, 0]]).is_psd().unwrap());
        assert!(!ints(&r, &[&[0, 1], &[1, 0]]).is_psd().unwrap());
        // leading minors 0, 0 but the (2,2) entry is negative
        assert!(!ints(&r, &[&[0, 0], &[0, -1]]).is_psd().unwrap());
        let mut h = ints(&r, &[&[2, 0], &[0, 1]]);
        h.set(0, 1, Scalar::constant(&r, GaussianRational::i()));
        h.set(1, 0, Scalar::constant(&r, -GaussianRational::i()));
        assert!(h.is_psd().unwrap());
        assert!(ints(&r, &[&[1, 2], &[3, 1]]).is_psd().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bareiss_matches_cofactors(seed in any::<u64>(), n in 1usize..=4) {
            let r = Ring::symbolic(2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = Matrix::from_fn(&r, n, n, |_, _| {
                if rng.random_bool(0.3) { Scalar::zero(&r) } else { crate::random::scalar(&mut rng, &r) }
            });
            let d = m.det().unwrap();
            prop_assert_eq!(&d, &laplace(&m));
            if !d.is_zero() {
                let (d2, adj) = m.adjugate().unwrap();
                prop_assert_eq!(&d2, &d);
                prop_assert_eq!(m.mul(&adj).unwrap(), Matrix::identity(&r, n).scale(&d));
                prop_assert_eq!(m.rank().unwrap(), n);
            }
        }
    }
}
