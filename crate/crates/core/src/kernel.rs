//! Reproducing kernels and operators on `B_H`.
//!
//! A kernel is a [`TensorElement`] `sum c A(x) (x) B(y)`. Pairing it with
//! `f(y)` over the right slot is anti-linear in the kernel:
//!
//! ```text
//! < c A (x) B, f > = conj(c) A^* <B, f>_w
//! ```

use std::collections::BTreeMap;

use crate::error::{PgError, Result};
use crate::form::{inner_closed, norm_squared};
use crate::gram::GramMatrix;
use crate::linalg::Matrix;
use crate::pg::{PgElement, Subspace, Var};
use crate::scalar::{Ring, Scalar};

pub type Index = (usize, usize);

/// Element of a two-variable tensor product such as `B_AH(th) (x) B_H(eta)`.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    ring: Ring,
    left_var: Var,
    right_var: Var,
    left_space: Subspace,
    right_space: Subspace,
    terms: BTreeMap<(Index, Index), Scalar>,
}

impl TensorElement {
    pub fn zero(ring: &Ring, left: (Var, Subspace), right: (Var, Subspace)) -> Self {
        TensorElement {
            ring: ring.clone(),
            left_var: left.0,
            right_var: right.0,
            left_space: left.1,
            right_space: right.1,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `c * th^a thb^b (x) eta^c etab^d`.
    pub fn add_term(&mut self, left: Index, right: Index, c: Scalar) -> Result<()> {
        let l = self.ring.l();
        for (i, j) in [left, right] {
            if i >= l || j >= l {
                return Err(PgError::IndexOutOfRange { i, j, l });
            }
        }
        for (space, (i, j)) in [(self.left_space, left), (self.right_space, right)] {
            if !space.contains_index(i, j) {
                return Err(PgError::WrongSubspace(space));
            }
        }
        self.ring.ensure_same(c.ring())?;
        let slot = self.terms.entry((left, right)).or_insert_with(|| Scalar::zero(&self.ring));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&(left, right));
        }
        Ok(())
    }

    /// `sum_k a_k (x) b_k` over the given pairs of elements.
    pub fn from_pairs(
        left: (Var, Subspace),
        right: (Var, Subspace),
        pairs: &[(PgElement, PgElement)],
    ) -> Result<Self> {
        let ring = pairs.first().map(|(a, _)| a.ring().clone()).ok_or(PgError::LengthMismatch { expected: 1, found: 0 })?;
        let mut out = Self::zero(&ring, left, right);
        for (a, b) in pairs {
            for (i, j, x) in a.terms() {
                for (c, d, y) in b.terms() {
                    out.add_term((i, j), (c, d), x * y)?;
                }
            }
        }
        Ok(out)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn left_var(&self) -> &Var {
        &self.left_var
    }

    pub fn right_var(&self) -> &Var {
        &self.right_var
    }

    pub fn left_space(&self) -> Subspace {
        self.left_space
    }

    pub fn right_space(&self) -> Subspace {
        self.right_space
    }

    pub fn terms(&self) -> impl Iterator<Item = (Index, Index, &Scalar)> {
        self.terms.iter().map(|((a, b), c)| (*a, *b, c))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, left: Index, right: Index) -> Scalar {
        self.terms.get(&(left, right)).cloned().unwrap_or_else(|| Scalar::zero(&self.ring))
    }

    pub fn with_vars(mut self, left: Var, right: Var) -> Self {
        self.left_var = left;
        self.right_var = right;
        self
    }

    /// Applies `star` in both slots.
    pub fn star_slots(&self) -> TensorElement {
        let mut out = Self::zero(&self.ring, (self.left_var.clone(), star_space(self.left_space)), (self.right_var.clone(), star_space(self.right_space)));
        for ((a, b), (c, d), x) in self.terms() {
            out.terms.insert(((b, a), (d, c)), x.conj());
        }
        out
    }

    /// `(sum c A (x) B)^* = sum conj(c) B^* (x) A^*`: conjugate each slot
    /// and exchange them.
    pub fn conj_swap(&self) -> TensorElement {
        let mut out = Self::zero(
            &self.ring,
            (self.right_var.clone(), star_space(self.right_space)),
            (self.left_var.clone(), star_space(self.left_space)),
        );
        for ((a, b), (c, d), x) in self.terms() {
            out.terms.insert(((d, c), (b, a)), x.conj());
        }
        out
    }

    /// `<self, f>` over the right slot, an element of the left variable.
    /// `f` is first moved to the right variable.
    pub fn pair_right(&self, f: &PgElement) -> Result<PgElement> {
        self.ring.ensure_same(f.ring())?;
        let f = f.clone().with_var(self.right_var.clone());
        let l = self.ring.l();
        let mut out = PgElement::zero_in(&self.ring, self.left_var.clone());
        let mut cache: BTreeMap<Index, Scalar> = BTreeMap::new();
        for ((a, b), (c, d), x) in self.terms() {
            let g = match cache.get(&(c, d)) {
                Some(g) => g.clone(),
                None => {
                    let basis = PgElement::basis(&self.ring, c, d)?.with_var(self.right_var.clone());
                    let g = inner_closed(&basis, &f)?;
                    cache.insert((c, d), g.clone());
                    g
                }
            };
            if g.is_zero() {
                continue;
            }
            let term = PgElement::basis(&self.ring, b, a)?.with_var(self.left_var.clone()).scale(&(&x.conj() * &g));
            out = out.checked_add(&term)?;
        }
        debug_assert_eq!(out.l(), l);
        Ok(out)
    }

    /// `<self, other>` over both right slots:
    /// `sum conj(c) c' <B, B'> A' (x) A^*`.
    pub fn pair_tensors(&self, other: &TensorElement) -> Result<TensorElement> {
        self.ring.ensure_same(&other.ring)?;
        if self.right_var != other.right_var {
            return Err(PgError::VariableMismatch { expected: self.right_var.to_string(), found: other.right_var.to_string() });
        }
        let mut out = Self::zero(
            &self.ring,
            (other.left_var.clone(), other.left_space),
            (self.left_var.clone(), star_space(self.left_space)),
        );
        for ((a, b), (c, d), x) in self.terms() {
            let bra = PgElement::basis(&self.ring, c, d)?;
            for (left, (e, f), y) in other.terms() {
                let g = inner_closed(&bra, &PgElement::basis(&self.ring, e, f)?)?;
                if !g.is_zero() {
                    out.add_term(left, (b, a), &(&x.conj() * y) * &g)?;
                }
            }
        }
        Ok(out)
    }
}

fn star_space(s: Subspace) -> Subspace {
    match s {
        Subspace::Holomorphic => Subspace::AntiHolomorphic,
        Subspace::AntiHolomorphic => Subspace::Holomorphic,
        other => other,
    }
}

impl std::fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TensorElement[{} {} (x) {} {}]({})", self.left_space, self.left_var, self.right_space, self.right_var, self)
    }
}

impl std::fmt::Display for TensorElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::render::tensor_text(self))
    }
}

/// `K(th, eta) = sum_j w_j^{-1} thb^j (x) eta^j`.
pub fn kernel_bh(ring: &Ring) -> Result<TensorElement> {
    kernel_bh_in(ring, Var::theta(), Var::eta())
}

pub fn kernel_bh_in(ring: &Ring, left: Var, right: Var) -> Result<TensorElement> {
    let mut k = TensorElement::zero(ring, (left, Subspace::AntiHolomorphic), (right, Subspace::Holomorphic));
    for j in 0..ring.l() {
        k.add_term((0, j), (j, 0), Scalar::weight_pow(ring, j, -1))?;
    }
    Ok(k)
}

/// `K_AH(th, eta) = sum_j w_j^{-1} th^j (x) etab^j`.
pub fn kernel_ah(ring: &Ring) -> Result<TensorElement> {
    let mut k = TensorElement::zero(ring, (Var::theta(), Subspace::Holomorphic), (Var::eta(), Subspace::AntiHolomorphic));
    for j in 0..ring.l() {
        k.add_term((j, 0), (0, j), Scalar::weight_pow(ring, j, -1))?;
    }
    Ok(k)
}

/// `f(th) = <K(th, eta), f(eta)>_w` for holomorphic `f`.
pub fn reproduce_bh(k: &TensorElement, f: &PgElement) -> Result<PgElement> {
    if !f.in_subspace(Subspace::Holomorphic) {
        return Err(PgError::WrongSubspace(Subspace::Holomorphic));
    }
    k.pair_right(f)
}

/// `f(th) = <K_AH(th, eta), f(eta)>_w` for anti-holomorphic `f`.
pub fn reproduce_ah(k: &TensorElement, f: &PgElement) -> Result<PgElement> {
    if !f.in_subspace(Subspace::AntiHolomorphic) {
        return Err(PgError::WrongSubspace(Subspace::AntiHolomorphic));
    }
    k.pair_right(f)
}

/// `<K(eta, th), K(rho, th)>_w`, pairing over the shared `th` slot. The
/// result is `K(rho, eta)`.
pub fn kernel_self_pairing(ring: &Ring, eta: Var, rho: Var) -> Result<TensorElement> {
    let a = kernel_bh_in(ring, eta, Var::theta())?;
    let b = kernel_bh_in(ring, rho, Var::theta())?;
    a.pair_tensors(&b)
}

/// The full-space kernel: `k_abcd = conj((G^{-1})_{(b,a),(c,d)})`, solved
/// block by block.
pub fn kernel_pg(ring: &Ring) -> Result<TensorElement> {
    kernel_pg_from(&GramMatrix::new(ring), false)
}

/// As [`kernel_pg`], optionally inverting the whole Gram matrix at once.
pub fn kernel_pg_from(gram: &GramMatrix, dense: bool) -> Result<TensorElement> {
    let ring = gram.ring();
    let inv = if dense { gram.inverse_dense()? } else { gram.inverse_blocks()? };
    let basis = gram.basis();
    let pos = |idx: Index| basis.iter().position(|&b| b == idx).expect("basis index");
    let mut k = TensorElement::zero(ring, (Var::theta(), Subspace::Full), (Var::eta(), Subspace::Full));
    for &(a, b) in basis {
        for &(c, d) in basis {
            let v = inv.get(pos((b, a)), pos((c, d)));
            if !v.is_zero() {
                k.add_term((a, b), (c, d), v.conj())?;
            }
        }
    }
    Ok(k)
}

/// `f(th, thb) = <K_PG, f(eta, etab)>_w`.
pub fn reproduce_pg(k: &TensorElement, f: &PgElement) -> Result<PgElement> {
    k.pair_right(f)
}

/// A linear operator on `B_H`, as a matrix in the basis `th^j`
/// (`m[r][c]` is the `th^r` component of the image of `th^c`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorOnBH {
    matrix: Matrix,
}

impl OperatorOnBH {
    pub fn identity(ring: &Ring) -> Self {
        OperatorOnBH { matrix: Matrix::identity(ring, ring.l()) }
    }

    pub fn from_matrix(matrix: Matrix) -> Self {
        OperatorOnBH { matrix }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Reads `sum c_ab thb^a (x) th^b` as `sum c_ab |th^b><th^a|`.
    pub fn from_tensor(t: &TensorElement) -> Result<Self> {
        if t.left_space() != Subspace::AntiHolomorphic || t.right_space() != Subspace::Holomorphic {
            return Err(PgError::WrongSubspace(Subspace::Holomorphic));
        }
        let ring = t.ring();
        let l = ring.l();
        let mut m = Matrix::zeros(ring, l, l);
        for ((_, a), (b, _), c) in t.terms() {
            let v = m.get(b, a) + &(c * &Scalar::weight(ring, a));
            m.set(b, a, v);
        }
        Ok(OperatorOnBH { matrix: m })
    }

    /// `|f><f|`, i.e. `g -> f <f, g>_w`.
    pub fn ket_bra(f: &PgElement) -> Result<Self> {
        if !f.in_subspace(Subspace::Holomorphic) {
            return Err(PgError::WrongSubspace(Subspace::Holomorphic));
        }
        let ring = f.ring();
        let l = ring.l();
        let m = Matrix::from_fn(ring, l, l, |r, c| {
            &(f.coeff(r, 0) * &f.coeff(c, 0).conj()) * &Scalar::weight(ring, c)
        });
        Ok(OperatorOnBH { matrix: m })
    }

    pub fn apply(&self, g: &PgElement) -> Result<PgElement> {
        if !g.in_subspace(Subspace::Holomorphic) {
            return Err(PgError::WrongSubspace(Subspace::Holomorphic));
        }
        let ring = g.ring();
        let l = ring.l();
        let mut out = PgElement::zero_in(ring, g.var().clone());
        for r in 0..l {
            let v = (0..l).fold(Scalar::zero(ring), |acc, c| acc + &(self.matrix.get(r, c) * g.coeff(c, 0)));
            out = &out + &PgElement::basis(ring, r, 0)?.with_var(g.var().clone()).scale(&v);
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn trace(&self) -> Scalar {
        self.matrix.trace()
    }

    pub fn sub(&self, other: &OperatorOnBH) -> Result<OperatorOnBH> {
        Ok(OperatorOnBH { matrix: self.matrix.sub(&other.matrix)? })
    }

    pub fn scale(&self, s: &Scalar) -> OperatorOnBH {
        OperatorOnBH { matrix: self.matrix.scale(s) }
    }

    pub fn rank(&self) -> Result<usize> {
        self.matrix.rank()
    }

    /// `<g, A g>_w >= 0` for all `g`, decided through the Hermitian matrix
    /// `diag(w) A`.
    pub fn is_psd(&self) -> Result<bool> {
        let ring = self.matrix.ring();
        let l = ring.l();
        let w = Matrix::from_fn(ring, l, l, |r, c| if r == c { Scalar::weight(ring, r) } else { Scalar::zero(ring) });
        w.mul(&self.matrix)?.is_psd()
    }
}

/// `K(th, th)` read as an operator, together with a flag raised when the
/// weights are not all positive.
pub fn kernel_diagonal_operator(ring: &Ring) -> Result<(OperatorOnBH, bool)> {
    let k = kernel_bh_in(ring, Var::theta(), Var::theta())?;
    Ok((OperatorOnBH::from_tensor(&k)?, !ring.weights().is_positive()))
}

/// `D = ||f||^2 I - |f><f|` and whether `D >= 0`.
pub fn pointwise_operator_bound(f: &PgElement) -> Result<(OperatorOnBH, bool)> {
    let ring = f.ring();
    if ring.weights().is_symbolic() {
        return Err(PgError::Unsupported("sign tests need numeric weights".into()));
    }
    if !ring.weights().is_positive() {
        return Err(PgError::NotHilbert(Subspace::Holomorphic));
    }
    let d = OperatorOnBH::identity(ring).scale(&norm_squared(f)?).sub(&OperatorOnBH::ket_bra(f)?)?;
    let psd = d.is_psd()?;
    Ok((d, psd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{phi, phi_basis, WeightSpec};
    use crate::scalar::{GaussianRational, QMode};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn winv(r: &Ring, n: usize) -> Scalar {
        Scalar::weight_pow(r, n, -1)
    }

    fn b(r: &Ring, i: usize, j: usize) -> PgElement {
        PgElement::basis(r, i, j).unwrap()
    }

    #[test]
    fn l2_kernels() {
        let r = Ring::symbolic(2).unwrap();
        let k = kernel_bh(&r).unwrap();
        assert_eq!(k.n_terms(), 2);
        assert_eq!(k.coeff((0, 0), (0, 0)), winv(&r, 0));
        assert_eq!(k.coeff((0, 1), (1, 0)), winv(&r, 1));
        let kah = kernel_ah(&r).unwrap();
        assert_eq!(kah.coeff((1, 0), (0, 1)), winv(&r, 1));
        assert_eq!(kah, k.star_slots());
    }

    #[test]
    fn kernel_is_the_onb_expansion() {
        for l in 2..=6 {
            let r = Ring::symbolic(l).unwrap();
            let phis = phi_basis(&r, Subspace::Holomorphic).unwrap();
            let pairs: Vec<_> = phis.iter().map(|p| (p.star(), p.clone())).collect();
            let t = TensorElement::from_pairs((Var::theta(), Subspace::AntiHolomorphic), (Var::eta(), Subspace::Holomorphic), &pairs).unwrap();
            assert_eq!(t, kernel_bh(&r).unwrap());
        }
    }

    #[test]
    fn onb_change_leaves_kernel_fixed() {
        // Rotation by the Pythagorean angle (3/5, 4/5) with a phase i on the second vector.
        let r = Ring::new(QMode::Symbolic, WeightSpec::from_ints(&[4, 9, 1]).unwrap()).unwrap();
        let phis = phi_basis(&r, Subspace::Holomorphic).unwrap();
        let c = |re: (i64, i64), im: (i64, i64)| Scalar::constant(&r, GaussianRational::from_parts(re, im));
        let u = [
            [c((3, 5), (0, 1)), c((4, 5), (0, 1)), c((0, 1), (0, 1))],
            [c((0, 1), (-4, 5)), c((0, 1), (3, 5)), c((0, 1), (0, 1))],
            [c((0, 1), (0, 1)), c((0, 1), (0, 1)), c((1, 1), (0, 1))],
        ];
        let psis: Vec<PgElement> = u
            .iter()
            .map(|row| row.iter().zip(&phis).fold(PgElement::zero(&r), |acc, (x, p)| &acc + &p.scale(x)))
            .collect();
        for (x, p) in psis.iter().enumerate() {
            for (y, q) in psis.iter().enumerate() {
                assert_eq!(inner_closed(p, q).unwrap().is_one(), x == y);
            }
        }
        let pairs: Vec<_> = psis.iter().map(|p| (p.star(), p.clone())).collect();
        let t = TensorElement::from_pairs((Var::theta(), Subspace::AntiHolomorphic), (Var::eta(), Subspace::Holomorphic), &pairs).unwrap();
        assert_eq!(t, kernel_bh(&r).unwrap());
    }

    #[test]
    fn reproducing_formula() {
        for l in 2..=6 {
            let r = Ring::symbolic(l).unwrap();
            let k = kernel_bh(&r).unwrap();
            let kah = kernel_ah(&r).unwrap();
            for n in 0..l {
                assert_eq!(reproduce_bh(&k, &b(&r, n, 0)).unwrap(), b(&r, n, 0));
                assert_eq!(reproduce_ah(&kah, &b(&r, 0, n)).unwrap(), b(&r, 0, n));
            }
            assert!(matches!(reproduce_bh(&k, &b(&r, 0, 1)), Err(PgError::WrongSubspace(_))));
        }
    }

    #[test]
    fn subspace_kernel_is_unique() {
        let r = Ring::symbolic(3).unwrap();
        let k = kernel_bh(&r).unwrap();
        for a in 0..3 {
            for c in 0..3 {
                let mut bad = k.clone();
                bad.add_term((0, a), (c, 0), Scalar::one(&r)).unwrap();
                assert!((0..3).any(|n| reproduce_bh(&bad, &b(&r, n, 0)).unwrap() != b(&r, n, 0)));
            }
        }
    }

    #[test]
    fn self_pairing() {
        for l in 2..=5 {
            let r = Ring::symbolic(l).unwrap();
            let k = kernel_self_pairing(&r, Var::eta(), Var::rho()).unwrap();
            assert_eq!(k, kernel_bh_in(&r, Var::rho(), Var::eta()).unwrap());
            let diag = kernel_self_pairing(&r, Var::rho(), Var::rho()).unwrap();
            assert_eq!(diag, kernel_bh_in(&r, Var::rho(), Var::rho()).unwrap());
            let k_er = kernel_bh_in(&r, Var::eta(), Var::rho()).unwrap();
            assert_eq!(k_er.conj_swap(), kernel_bh_in(&r, Var::rho(), Var::eta()).unwrap());
        }
    }

    #[test]
    fn diagonal_operator_is_identity() {
        for l in 2..=6 {
            for r in [
                Ring::symbolic(l).unwrap(),
                Ring::new(QMode::Real, WeightSpec::factorial(l).unwrap()).unwrap(),
            ] {
                let (op, indefinite) = kernel_diagonal_operator(&r).unwrap();
                assert!(op.is_identity());
                assert!(!indefinite);
                assert_eq!(op.trace(), Scalar::from_int(&r, l as i64));
                let sum = phi_basis(&r, Subspace::Holomorphic)
                    .unwrap()
                    .iter()
                    .map(|p| OperatorOnBH::ket_bra(p).unwrap().matrix().clone())
                    .reduce(|a, m| a.sub(&m.scale(&-Scalar::one(&r))).unwrap())
                    .unwrap();
                assert!(sum.is_identity());
            }
        }
        let neg = Ring::new(QMode::Symbolic, WeightSpec::from_ints(&[-1, 2, 3]).unwrap()).unwrap();
        let (op, indefinite) = kernel_diagonal_operator(&neg).unwrap();
        assert!(op.is_identity() && indefinite);
    }

    #[test]
    fn operator_bound_examples() {
        let r = Ring::new(QMode::Symbolic, WeightSpec::from_ints(&[4, 2, 3, 5]).unwrap()).unwrap();
        let (d, psd) = pointwise_operator_bound(&PgElement::zero(&r)).unwrap();
        assert!(psd);
        assert!(d.matrix().rank().unwrap() == 0);
        let (d, psd) = pointwise_operator_bound(&phi(&r, 0).unwrap()).unwrap();
        assert!(psd);
        assert_eq!(d.rank().unwrap(), 3);
        let g = b(&r, 0, 0);
        assert!(d.apply(&g).unwrap().is_zero());
        let ket = OperatorOnBH::ket_bra(&b(&r, 1, 0)).unwrap();
        assert_eq!(ket.apply(&b(&r, 1, 0)).unwrap(), b(&r, 1, 0).scale(&Scalar::from_int(&r, 2)));
        let sym = Ring::symbolic(3).unwrap();
        assert!(pointwise_operator_bound(&b(&sym, 1, 0)).is_err());
        assert!(pointwise_operator_bound(&b(&r, 1, 1)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn operator_bound_is_psd(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = Ring::new(QMode::Symbolic, crate::random::positive_weights(&mut rng, 4)).unwrap();
            let f = crate::random::holomorphic_constant(&mut rng, &r);
            let (_, psd) = pointwise_operator_bound(&f).unwrap();
            prop_assert!(psd);
        }

        #[test]
        fn random_holomorphic_reproduced(seed in any::<u64>(), l in 2usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = Ring::symbolic(l).unwrap();
            let f = crate::random::holomorphic(&mut rng, &r);
            prop_assert_eq!(reproduce_bh(&kernel_bh(&r).unwrap(), &f).unwrap(), f);
        }
    }
}
