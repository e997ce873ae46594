//! Coherent states and the Segal-Bargmann transform `C: H -> B_H`.
//!
//! `H` is an abstract `l`-dimensional Hilbert space with orthonormal basis
//! `e_n`; vectors are coordinate lists. A coherent state is a list of
//! labelled components, the label naming the basis vector `e_n` (or the dual
//! `e_n'`) that the component is tensored with.

use crate::error::{PgError, Result};
use crate::form::{inner_closed, phi};
use crate::kernel::TensorElement;
use crate::pg::{PgElement, Subspace, Var};
use crate::scalar::{Ring, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoherentKind {
    /// `|th> = sum_n phi_n(th) (x) e_n`.
    Ket,
    /// `<th| = sum_n phi_n^*(thb) (x) e_n'`.
    Bra,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherentState {
    kind: CoherentKind,
    space: Subspace,
    components: Vec<(usize, PgElement)>,
}

impl CoherentState {
    pub fn kind(&self) -> CoherentKind {
        self.kind
    }

    /// `(label, element)` pairs.
    pub fn components(&self) -> &[(usize, PgElement)] {
        &self.components
    }

    /// Subspace holding the algebra-valued factors.
    pub fn space(&self) -> Subspace {
        self.space
    }

    /// Reinterprets the state as a ket or a bra.
    pub fn with_kind(mut self, kind: CoherentKind) -> Self {
        self.kind = kind;
        self
    }

    /// Renames the basis labels by `perm`, the same relabelling of `e_n` and
    /// `e_n'`.
    pub fn relabel(&self, perm: &[usize]) -> CoherentState {
        let components = self.components.iter().map(|(n, f)| (perm[*n], f.clone())).collect();
        CoherentState { components, ..self.clone() }
    }

    /// Applies `star` to every component: the coherent states of the
    /// conjugate variable.
    pub fn star(&self) -> CoherentState {
        let components = self.components.iter().map(|(n, f)| (*n, f.star())).collect();
        let space = match self.space {
            Subspace::Holomorphic => Subspace::AntiHolomorphic,
            _ => Subspace::Holomorphic,
        };
        CoherentState { kind: self.kind, space, components }
    }
}

pub fn coherent_ket(ring: &Ring, var: Var) -> Result<CoherentState> {
    let components = (0..ring.l()).map(|n| Ok((n, phi(ring, n)?.with_var(var.clone())))).collect::<Result<_>>()?;
    Ok(CoherentState { kind: CoherentKind::Ket, space: Subspace::Holomorphic, components })
}

pub fn coherent_bra(ring: &Ring, var: Var) -> Result<CoherentState> {
    let components =
        (0..ring.l()).map(|n| Ok((n, phi(ring, n)?.star().with_var(var.clone())))).collect::<Result<_>>()?;
    Ok(CoherentState { kind: CoherentKind::Bra, space: Subspace::AntiHolomorphic, components })
}

/// `<th|eta> = sum_{j,k} bra_j (x) ket_k <e_j', e_k> = sum_j bra_j (x) ket_j`.
pub fn coherent_pairing(bra: &CoherentState, ket: &CoherentState) -> Result<TensorElement> {
    if bra.kind != CoherentKind::Bra || ket.kind != CoherentKind::Ket {
        return Err(PgError::Unsupported("pairing needs a bra on the left and a ket on the right".into()));
    }
    let (Some((_, b0)), Some((_, k0))) = (bra.components.first(), ket.components.first()) else {
        return Err(PgError::LengthMismatch { expected: 1, found: 0 });
    };
    let mut pairs = Vec::new();
    for (j, b) in &bra.components {
        for (k, f) in &ket.components {
            if j == k {
                pairs.push((b.clone(), f.clone()));
            }
        }
    }
    TensorElement::from_pairs((b0.var().clone(), bra.space()), (k0.var().clone(), ket.space()), &pairs)
}

/// `C psi = sum_n <e_n', psi> phi_n(th)`.
pub fn sb_transform(ring: &Ring, psi: &[Scalar]) -> Result<PgElement> {
    let l = ring.l();
    if psi.len() != l {
        return Err(PgError::LengthMismatch { expected: l, found: psi.len() });
    }
    let mut out = PgElement::zero(ring);
    for (n, c) in psi.iter().enumerate() {
        out = out.checked_add(&phi(ring, n)?.scale(c))?;
    }
    Ok(out)
}

/// `C` applied to the `H` slot of a ket, `<<th|, |eta>> = <th|eta>`.
pub fn sb_transform_ket(ket: &CoherentState) -> Result<TensorElement> {
    let ring = ket.components.first().map(|(_, f)| f.ring().clone()).ok_or(PgError::LengthMismatch { expected: 1, found: 0 })?;
    coherent_pairing(&coherent_bra(&ring, Var::theta())?, ket)
}

/// Coordinates `<phi_n, f>_w` of a holomorphic `f`.
pub fn sb_inverse(f: &PgElement) -> Result<Vec<Scalar>> {
    if !f.in_subspace(Subspace::Holomorphic) {
        return Err(PgError::WrongSubspace(Subspace::Holomorphic));
    }
    let ring = f.ring();
    let f = f.clone().with_var(Var::theta());
    (0..ring.l()).map(|n| inner_closed(&phi(ring, n)?, &f)).collect()
}

/// `<psi, chi>_H = sum conj(psi_n) chi_n`.
pub fn h_inner(psi: &[Scalar], chi: &[Scalar]) -> Result<Scalar> {
    if psi.len() != chi.len() {
        return Err(PgError::LengthMismatch { expected: psi.len(), found: chi.len() });
    }
    let ring = psi.first().map(|s| s.ring().clone()).ok_or(PgError::LengthMismatch { expected: 1, found: 0 })?;
    Ok(psi.iter().zip(chi).fold(Scalar::zero(&ring), |acc, (a, b)| acc + &(&a.conj() * b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::WeightSpec;
    use crate::kernel::{kernel_ah, kernel_bh, kernel_bh_in};
    use crate::scalar::QMode;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(ring: &Ring, j: usize) -> Vec<Scalar> {
        (0..ring.l()).map(|n| if n == j { Scalar::one(ring) } else { Scalar::zero(ring) }).collect()
    }

    #[test]
    fn l2_ket() {
        let r = Ring::symbolic(2).unwrap();
        let ket = coherent_ket(&r, Var::theta()).unwrap();
        let c = ket.components();
        assert_eq!(c[0], (0, PgElement::from_scalar(Scalar::u_pow(&r, 0, 1))));
        assert_eq!(c[1], (1, PgElement::theta(&r).scale(&Scalar::u_pow(&r, 1, 1))));
        let bra = coherent_bra(&r, Var::theta()).unwrap();
        assert_eq!(bra, ket.star().with_kind(CoherentKind::Bra));
    }

    #[test]
    fn pairing_is_the_kernel() {
        for l in 2..=6 {
            let r = Ring::symbolic(l).unwrap();
            let bra = coherent_bra(&r, Var::theta()).unwrap();
            let ket = coherent_ket(&r, Var::eta()).unwrap();
            let k = coherent_pairing(&bra, &ket).unwrap();
            assert_eq!(k, kernel_bh(&r).unwrap());
            assert_eq!(sb_transform_ket(&ket).unwrap(), k);
            let perm: Vec<usize> = (0..l).rev().collect();
            assert_eq!(coherent_pairing(&bra.relabel(&perm), &ket.relabel(&perm)).unwrap(), k);
        }
        let r = Ring::new(QMode::Symbolic, WeightSpec::ones(2).unwrap()).unwrap();
        let k = coherent_pairing(&coherent_bra(&r, Var::theta()).unwrap(), &coherent_ket(&r, Var::eta()).unwrap()).unwrap();
        assert_eq!(k.n_terms(), 2);
        assert!(k.coeff((0, 0), (0, 0)).is_one() && k.coeff((0, 1), (1, 0)).is_one());
    }

    #[test]
    fn non_square_numeric_weights_pair_exactly() {
        let r = Ring::new(QMode::Symbolic, WeightSpec::from_ints(&[2, 3, 5]).unwrap()).unwrap();
        let k = coherent_pairing(&coherent_bra(&r, Var::theta()).unwrap(), &coherent_ket(&r, Var::eta()).unwrap()).unwrap();
        assert_eq!(k, kernel_bh(&r).unwrap());
    }

    #[test]
    fn transform_on_basis() {
        for l in 2..=6 {
            let r = Ring::symbolic(l).unwrap();
            for j in 0..l {
                let cj = sb_transform(&r, &e(&r, j)).unwrap();
                assert_eq!(cj, phi(&r, j).unwrap());
                assert_eq!(sb_inverse(&cj).unwrap(), e(&r, j));
                for k in 0..l {
                    let ck = sb_transform(&r, &e(&r, k)).unwrap();
                    assert_eq!(inner_closed(&cj, &ck).unwrap(), h_inner(&e(&r, j), &e(&r, k)).unwrap());
                }
            }
            assert!(sb_transform(&r, &e(&r, 0)[1..]).is_err());
        }
    }

    #[test]
    fn inverse_recovers_kernel_components() {
        let r = Ring::symbolic(4).unwrap();
        let k = kernel_bh_in(&r, Var::theta(), Var::eta()).unwrap();
        let bra = coherent_bra(&r, Var::theta()).unwrap();
        // right slot of K, read against each left basis vector thb^j
        for (j, (_, b)) in bra.components().iter().enumerate() {
            let right = PgElement::basis(&r, j, 0).unwrap().scale(&k.coeff((0, j), (j, 0)));
            let coords = sb_inverse(&right).unwrap();
            // K = sum phi_j^* (x) phi_j, so the right slot paired with thb^j is w_j^{-1} th^j = u_j phi_j
            assert_eq!(coords[j], b.coeff(0, j).clone());
        }
    }

    #[test]
    fn mirrored_states_give_the_antiholomorphic_kernel() {
        for l in 2..=5 {
            let r = Ring::symbolic(l).unwrap();
            let bra = coherent_ket(&r, Var::theta()).unwrap().with_kind(CoherentKind::Bra);
            let ket = coherent_bra(&r, Var::eta()).unwrap().with_kind(CoherentKind::Ket);
            let k = coherent_pairing(&bra, &ket).unwrap();
            assert_eq!(k, kernel_ah(&r).unwrap());
            assert_eq!(k, kernel_bh(&r).unwrap().star_slots());
            // the swap isomorphism carries phi_n(th) to phi_n^*(th) in PG_{l,1/q}
            for (n, f) in coherent_ket(&r, Var::theta()).unwrap().components() {
                let s = f.swap_iso();
                assert_eq!(s.coeff(0, *n), f.star().coeff(0, *n));
                assert!(s.in_subspace(Subspace::AntiHolomorphic));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn unitarity_and_round_trip(seed in any::<u64>(), l in 2usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = Ring::symbolic(l).unwrap();
            let psi: Vec<Scalar> = (0..l).map(|_| crate::random::scalar(&mut rng, &r)).collect();
            let chi: Vec<Scalar> = (0..l).map(|_| crate::random::scalar(&mut rng, &r)).collect();
            let cpsi = sb_transform(&r, &psi).unwrap();
            let cchi = sb_transform(&r, &chi).unwrap();
            prop_assert_eq!(inner_closed(&cpsi, &cchi).unwrap(), h_inner(&psi, &chi).unwrap());
            prop_assert_eq!(sb_inverse(&cpsi).unwrap(), psi);
            let f = crate::random::holomorphic(&mut rng, &r);
            prop_assert_eq!(sb_transform(&r, &sb_inverse(&f).unwrap()).unwrap(), f);
        }
    }
}
