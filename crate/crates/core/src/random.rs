//! Random exact values for property tests and the acceptance suite.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::form::WeightSpec;
use crate::pg::{PgElement, Subspace, Var};
use crate::scalar::{GaussianRational, Ring, Scalar};

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(rng.random_range(-4i64..=4)), BigInt::from(rng.random_range(1i64..=3)))
}

/// Gaussian rational with small numerators and denominators.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    let im = if rng.random_bool(0.5) { small_rational(rng) } else { BigRational::from_integer(0.into()) };
    GaussianRational::new(small_rational(rng), im)
}

/// Up to three terms with small `q`, `qb` and weight exponents.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R, ring: &Ring) -> Scalar {
    let l = ring.l();
    let mut acc = Scalar::zero(ring);
    for _ in 0..rng.random_range(1..=3) {
        let q = rng.random_range(-2..=2);
        let qb = rng.random_range(-2..=2);
        let w: Vec<i32> = (0..l).map(|_| if rng.random_bool(0.25) { rng.random_range(-1..=2) } else { 0 }).collect();
        let t = Scalar::monomial(ring, gaussian(rng), q, qb, &w, &[]).expect("lengths match");
        acc = acc + &t;
    }
    acc
}

/// Constant times a weight monomial; never mentions `q`.
pub fn scalar_q_free<R: Rng + ?Sized>(rng: &mut R, ring: &Ring) -> Scalar {
    let l = ring.l();
    let w: Vec<i32> = (0..l).map(|_| if rng.random_bool(0.3) { rng.random_range(-1..=2) } else { 0 }).collect();
    Scalar::monomial(ring, gaussian(rng), 0, 0, &w, &[]).expect("lengths match")
}

fn fill<R: Rng + ?Sized>(
    rng: &mut R,
    ring: &Ring,
    subspace: Subspace,
    mut coeff: impl FnMut(&mut R) -> Scalar,
) -> PgElement {
    PgElement::from_fn(ring, Var::theta(), |i, j| {
        if subspace.contains_index(i, j) && rng.random_bool(0.6) {
            coeff(rng)
        } else {
            Scalar::zero(ring)
        }
    })
}

pub fn element<R: Rng + ?Sized>(rng: &mut R, ring: &Ring) -> PgElement {
    fill(rng, ring, Subspace::Full, |r| scalar(r, ring))
}

pub fn element_q_free<R: Rng + ?Sized>(rng: &mut R, ring: &Ring) -> PgElement {
    fill(rng, ring, Subspace::Full, |r| scalar_q_free(r, ring))
}

/// Element with Gaussian-rational constant coefficients.
pub fn element_constant<R: Rng + ?Sized>(rng: &mut R, ring: &Ring) -> PgElement {
    fill(rng, ring, Subspace::Full, |r| Scalar::constant(ring, gaussian(r)))
}

pub fn holomorphic<R: Rng + ?Sized>(rng: &mut R, ring: &Ring) -> PgElement {
    fill(rng, ring, Subspace::Holomorphic, |r| scalar(r, ring))
}

/// Holomorphic element with constant coefficients.
pub fn holomorphic_constant<R: Rng + ?Sized>(rng: &mut R, ring: &Ring) -> PgElement {
    fill(rng, ring, Subspace::Holomorphic, |r| Scalar::constant(ring, gaussian(r)))
}

/// Positive rational weights `p/r` with `1 <= p <= 9`, `1 <= r <= 4`.
pub fn positive_weights<R: Rng + ?Sized>(rng: &mut R, l: usize) -> WeightSpec {
    let values = (0..l)
        .map(|_| BigRational::new(BigInt::from(rng.random_range(1i64..=9)), BigInt::from(rng.random_range(1i64..=4))))
        .collect();
    WeightSpec::numeric(values).expect("positive weights")
}
