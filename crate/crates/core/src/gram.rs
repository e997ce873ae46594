//! The Gram matrix `G_{cd,ij} = <th^c thb^d, th^i thb^j>_w` of the anti-Wick
//! basis.
//!
//! An entry is nonzero only when `c - d = i - j`, so grouping the basis by
//! the grade `i - j` makes `G` block diagonal with `2l - 1` blocks. The
//! block of grade `g` has size `l - |g|` and is the anti-triangular Hankel
//! matrix `H[s][t] = w_{s+t+|g|}` (zero past `w_{l-1}`).

use rayon::prelude::*;

use crate::error::Result;
use crate::form::inner_closed;
use crate::kernel::Index;
use crate::linalg::Matrix;
use crate::pg::{basis_order, PgElement};
use crate::scalar::{Ring, Scalar};

#[derive(Clone, Debug)]
pub struct GramBlock {
    pub grade: i64,
    /// Positions in [`GramMatrix::basis`].
    pub indices: Vec<usize>,
    pub matrix: Matrix,
}

#[derive(Clone, Debug)]
pub struct GramMatrix {
    ring: Ring,
    basis: Vec<Index>,
    entries: Matrix,
    blocks: Vec<GramBlock>,
}

impl GramMatrix {
    /// Builds `G` in the internal basis order (degree, then `i` descending).
    pub fn new(ring: &Ring) -> Self {
        Self::with_basis(ring, basis_order(ring.l()))
    }

    /// Builds `G` with rows and columns in the given order.
    pub fn with_basis(ring: &Ring, basis: Vec<Index>) -> Self {
        let elems: Vec<PgElement> =
            basis.iter().map(|&(i, j)| PgElement::basis(ring, i, j).expect("index in range")).collect();
        let n = basis.len();
        let entries = Matrix::from_fn(ring, n, n, |r, c| inner_closed(&elems[r], &elems[c]).expect("same algebra"));
        let l = ring.l() as i64;
        let blocks = (-(l - 1)..l)
            .map(|g| {
                let indices: Vec<usize> =
                    (0..n).filter(|&k| basis[k].0 as i64 - basis[k].1 as i64 == g).collect();
                let matrix = entries.select(&indices, &indices);
                GramBlock { grade: g, indices, matrix }
            })
            .collect();
        GramMatrix { ring: ring.clone(), basis, entries, blocks }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn l(&self) -> usize {
        self.ring.l()
    }

    pub fn basis(&self) -> &[Index] {
        &self.basis
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn blocks(&self) -> &[GramBlock] {
        &self.blocks
    }

    /// `det G` as the product of the block determinants. Regrouping rows
    /// and columns by the same permutation does not change the sign.
    pub fn det_blocks(&self) -> Result<Scalar> {
        let dets = self.blocks.par_iter().map(|b| b.matrix.det()).collect::<Result<Vec<_>>>()?;
        Ok(dets.iter().fold(Scalar::one(&self.ring), |acc, d| acc * d))
    }

    /// `det G` by elimination on the full `l^2 x l^2` matrix.
    pub fn det_dense(&self) -> Result<Scalar> {
        self.entries.det()
    }

    pub fn inverse_blocks(&self) -> Result<Matrix> {
        let invs = self.blocks.par_iter().map(|b| b.matrix.inverse()).collect::<Result<Vec<_>>>()?;
        let n = self.basis.len();
        let mut out = Matrix::zeros(&self.ring, n, n);
        for (b, inv) in self.blocks.iter().zip(&invs) {
            for (s, &r) in b.indices.iter().enumerate() {
                for (t, &c) in b.indices.iter().enumerate() {
                    out.set(r, c, inv.get(s, t).clone());
                }
            }
        }
        Ok(out)
    }

    pub fn inverse_dense(&self) -> Result<Matrix> {
        self.entries.inverse()
    }
}

/// Sign of `det G / w_{l-1}^{l^2}` for each `l` in the range, computed with
/// all weights equal to one.
pub fn det_sign_table(ls: impl IntoIterator<Item = usize>) -> Result<Vec<(usize, i32)>> {
    ls.into_iter()
        .map(|l| {
            let ring = Ring::new(crate::scalar::QMode::Real, crate::form::WeightSpec::ones(l)?)?;
            let d = GramMatrix::new(&ring).det_blocks()?;
            let sign = if d.is_one() { 1 } else if (-&d).is_one() { -1 } else { 0 };
            Ok((l, sign))
        })
        .collect()
}

/// Sign predicted by the block shapes. A block of size `m` has determinant
/// `(-1)^{m(m-1)/2} w_{l-1}^m`; the off-center blocks come in equal pairs,
/// leaving `(-1)^{l(l-1)/2}`.
pub fn predicted_det_sign(l: usize) -> i32 {
    if (l * (l - 1) / 2) % 2 == 0 { 1 } else { -1 }
}
