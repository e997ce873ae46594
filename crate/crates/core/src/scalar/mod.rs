//! Exact coefficients: Laurent polynomials in `q`, `qb`, the weights `w_n`
//! and the half-power symbols `u_n = w_n^{-1/2}`, with Gaussian-rational
//! coefficients.
//!
//! Every scalar carries its [`Ring`]. Terms are kept in a `BTreeMap` keyed by
//! exponent vectors, so the lexicographic term order is canonical and
//! equality is structural. The relation `u_n^2 = w_n^{-1}` is applied each
//! time a monomial is formed, leaving every `u_n` exponent in `{0, 1}`.

mod gaussian;
mod ring;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use gaussian::GaussianRational;
pub use ring::{QMode, Ring};

use crate::error::{PgError, Result};
use crate::form::WeightValues;

/// Exponent vector laid out as `[q, qb, w_0 .. w_{l-1}, u_0 .. u_{l-1}]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Box<[i32]>);

impl Monomial {
    fn one(ring: &Ring) -> Self {
        Monomial(vec![0; ring.n_vars()].into_boxed_slice())
    }

    pub fn q(&self) -> i32 {
        self.0[0]
    }

    pub fn qb(&self) -> i32 {
        self.0[1]
    }

    fn l(&self) -> usize {
        (self.0.len() - 2) / 2
    }

    pub fn w(&self, n: usize) -> i32 {
        self.0[2 + n]
    }

    pub fn u(&self, n: usize) -> i32 {
        self.0[2 + self.l() + n]
    }

    pub fn w_exponents(&self) -> &[i32] {
        let l = self.l();
        &self.0[2..2 + l]
    }

    pub fn u_exponents(&self) -> &[i32] {
        let l = self.l();
        &self.0[2 + l..]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn raw(&self) -> &[i32] {
        &self.0
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    ring: Ring,
    terms: BTreeMap<Monomial, GaussianRational>,
}

/// Rewrites `u_n^e` as `u_n^{e mod 2} * w_n^{-(e div 2)}`, folding numeric
/// weights into the coefficient.
fn normalize(ring: &Ring, exps: &mut [i32], coeff: &mut GaussianRational) {
    let l = ring.l();
    for n in 0..l {
        let e = exps[2 + l + n];
        if e == 0 || e == 1 {
            continue;
        }
        let k = e.div_euclid(2);
        exps[2 + l + n] = e.rem_euclid(2);
        match ring.weights().values() {
            WeightValues::Symbolic => exps[2 + n] -= k,
            WeightValues::Numeric(ws) => {
                let w = GaussianRational::real(ws[n].clone());
                // weights are nonzero by construction
                *coeff *= &w.pow(-k).expect("nonzero weight");
            }
        }
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

impl Scalar {
    pub fn zero(ring: &Ring) -> Self {
        Scalar { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, GaussianRational::one())
    }

    pub fn constant(ring: &Ring, c: GaussianRational) -> Self {
        let mut s = Self::zero(ring);
        s.add_term(Monomial::one(ring), c);
        s
    }

    pub fn from_int(ring: &Ring, n: i64) -> Self {
        Self::constant(ring, GaussianRational::from_int(n))
    }

    pub fn i(ring: &Ring) -> Self {
        Self::constant(ring, GaussianRational::i())
    }

    fn single(ring: &Ring, index: usize, exp: i32) -> Self {
        let mut m = vec![0; ring.n_vars()];
        m[index] = exp;
        let mut c = GaussianRational::one();
        normalize(ring, &mut m, &mut c);
        let mut s = Self::zero(ring);
        s.add_term(Monomial(m.into_boxed_slice()), c);
        s
    }

    pub fn q(ring: &Ring) -> Self {
        Self::q_pow(ring, 1)
    }

    pub fn qb(ring: &Ring) -> Self {
        Self::qb_pow(ring, 1)
    }

    /// `q^n`; negative powers are Laurent monomials.
    pub fn q_pow(ring: &Ring, n: i32) -> Self {
        match ring.q_mode() {
            QMode::Symbolic | QMode::Real => Self::single(ring, 0, n),
            QMode::Numeric(v) => Self::constant(ring, v.pow(n).expect("q is nonzero")),
        }
    }

    pub fn qb_pow(ring: &Ring, n: i32) -> Self {
        match ring.q_mode() {
            QMode::Symbolic => Self::single(ring, 1, n),
            QMode::Real => Self::single(ring, 0, n),
            QMode::Numeric(v) => Self::constant(ring, v.conj().pow(n).expect("q is nonzero")),
        }
    }

    pub fn weight(ring: &Ring, n: usize) -> Self {
        Self::weight_pow(ring, n, 1)
    }

    /// `w_n^e`; panics if `n >= l`.
    pub fn weight_pow(ring: &Ring, n: usize, e: i32) -> Self {
        assert!(n < ring.l(), "weight index {n} out of range");
        match ring.weights().values() {
            WeightValues::Symbolic => Self::single(ring, 2 + n, e),
            WeightValues::Numeric(ws) => Self::constant(
                ring,
                GaussianRational::real(ws[n].clone()).pow(e).expect("nonzero weight"),
            ),
        }
    }

    /// `w_n^{-1/2}`: an exact rational when a numeric `w_n` is a perfect
    /// square, otherwise the symbol `u_n`.
    pub fn weight_inv_sqrt(ring: &Ring, n: usize) -> Self {
        assert!(n < ring.l(), "weight index {n} out of range");
        if let WeightValues::Numeric(ws) = ring.weights().values() {
            if let Some(r) = rational_sqrt(&ws[n]) {
                return Self::constant(ring, GaussianRational::real(r.recip()));
            }
        }
        Self::u_pow(ring, n, 1)
    }

    /// `u_n^e` with `u_n = w_n^{-1/2}`.
    pub fn u_pow(ring: &Ring, n: usize, e: i32) -> Self {
        assert!(n < ring.l(), "weight index {n} out of range");
        Self::single(ring, 2 + ring.l() + n, e)
    }

    /// Builds `coeff * q^a * qb^b * prod w_n^{c_n} * prod u_n^{e_n}`.
    pub fn monomial(
        ring: &Ring,
        coeff: GaussianRational,
        q: i32,
        qb: i32,
        w: &[i32],
        u: &[i32],
    ) -> Result<Self> {
        let l = ring.l();
        for v in [w, u] {
            if !v.is_empty() && v.len() != l {
                return Err(PgError::LengthMismatch { expected: l, found: v.len() });
            }
        }
        let mut acc = Self::constant(ring, coeff) * &Self::q_pow(ring, q) * &Self::qb_pow(ring, qb);
        for (n, &e) in w.iter().enumerate().filter(|(_, e)| **e != 0) {
            acc = acc * &Self::weight_pow(ring, n, e);
        }
        for (n, &e) in u.iter().enumerate().filter(|(_, e)| **e != 0) {
            acc = acc * &Self::u_pow(ring, n, e);
        }
        Ok(acc)
    }

    fn add_term(&mut self, mono: Monomial, coeff: GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value when the scalar has no symbols.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True when the scalar mentions neither `q` nor `qb`.
    pub fn is_q_free(&self) -> bool {
        self.terms.keys().all(|m| m.q() == 0 && m.qb() == 0)
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.ring.ensure_same(&rhs.ring)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.ring.ensure_same(&rhs.ring)?;
        let mut out = Scalar::zero(&self.ring);
        let n = self.ring.n_vars();
        let mut buf = vec![0i32; n];
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                for (k, slot) in buf.iter_mut().enumerate() {
                    *slot = ma.raw()[k] + mb.raw()[k];
                }
                let mut c = ca * cb;
                normalize(&self.ring, &mut buf, &mut c);
                out.add_term(Monomial(buf.clone().into_boxed_slice()), c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Scalar {
        let mut out = Scalar::zero(&self.ring);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// Complex conjugation: conjugates coefficients and exchanges the `q`
    /// and `qb` exponents; weight symbols are real and stay fixed.
    pub fn conj(&self) -> Scalar {
        let swap = matches!(self.ring.q_mode(), QMode::Symbolic);
        let mut out = Scalar::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            if swap {
                e.swap(0, 1);
            }
            out.add_term(Monomial(e), c.conj());
        }
        out
    }

    /// True when the scalar is fixed by [`conj`](Self::conj) in its own ring.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Image under `qb -> q`, as a scalar of the matching real-q ring.
    /// Scalars that are already in a real or numeric ring are returned unchanged.
    pub fn fold_real(&self) -> Scalar {
        if !matches!(self.ring.q_mode(), QMode::Symbolic) {
            return self.clone();
        }
        let ring = self.ring.with_q_mode(QMode::Real).expect("ring was valid");
        let mut out = Scalar::zero(&ring);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e[0] += e[1];
            e[1] = 0;
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Numeric value under `q -> q_val`, `qb -> conj(q_val)`, `w_n -> w_vals[n]`
    /// and `u_n -> w_vals[n]^{-1/2}`.
    pub fn eval(&self, q_val: Complex64, w_vals: &[f64]) -> Result<Complex64> {
        let l = self.ring.l();
        if w_vals.len() != l {
            return Err(PgError::LengthMismatch { expected: l, found: w_vals.len() });
        }
        let qb_val = q_val.conj();
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let (re, im) = c.to_f64_pair();
            let mut v = Complex64::new(re, im);
            for (base, e) in [(q_val, m.q()), (qb_val, m.qb())] {
                if e != 0 {
                    if e < 0 && base == Complex64::new(0.0, 0.0) {
                        return Err(PgError::DivisionByZero);
                    }
                    v *= base.powi(e);
                }
            }
            for n in 0..l {
                let (we, ue) = (m.w(n), m.u(n));
                if (we < 0 || ue > 0) && w_vals[n] == 0.0 {
                    return Err(PgError::DivisionByZero);
                }
                if we != 0 {
                    v *= w_vals[n].powi(we);
                }
                if ue != 0 {
                    v *= Complex64::new(w_vals[n], 0.0).powf(-0.5 * ue as f64);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Inverse of a single-term scalar.
    pub fn inverse(&self) -> Result<Scalar> {
        if self.terms.len() != 1 {
            return Err(if self.is_zero() {
                PgError::DivisionByZero
            } else {
                PgError::InexactDivision
            });
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        let inv = c.inv().ok_or(PgError::DivisionByZero)?;
        let mut e: Vec<i32> = m.0.iter().map(|x| -x).collect();
        let mut coeff = inv;
        normalize(&self.ring, &mut e, &mut coeff);
        let mut out = Scalar::zero(&self.ring);
        out.add_term(Monomial(e.into_boxed_slice()), coeff);
        Ok(out)
    }

    pub fn pow(&self, exp: i32) -> Result<Scalar> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Scalar::one(&self.ring);
        let mut sq = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Exact quotient `self / d` in the Laurent ring.
    ///
    /// Uses leading-term division in the lexicographic order. If the
    /// remainder's leading monomial ever falls below the dividend's trailing
    /// monomial the division cannot be exact.
    pub fn div_exact(&self, d: &Scalar) -> Result<Scalar> {
        self.ring.ensure_same(&d.ring)?;
        if d.is_zero() {
            return Err(PgError::DivisionByZero);
        }
        if d.terms.len() == 1 {
            return Ok(self * &d.inverse()?);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        // lowest and highest degrees add under products, so every quotient
        // term of an exact division lies in a finite box
        let (plo, phi) = self.degree_span();
        let (dlo, dhi) = d.degree_span();
        let lo: Vec<i32> = plo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
        let hi: Vec<i32> = phi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(PgError::InexactDivision);
        }
        let volume = lo.iter().zip(&hi).fold(1u64, |acc, (a, b)| acc.saturating_mul((b - a + 1) as u64));
        let budget = volume.saturating_mul(1 << self.ring.l().min(16)).saturating_add(self.terms.len() as u64);
        let (dm, dc) = d.terms.iter().next_back().expect("nonzero");
        let lead_inv = Scalar::constant(&self.ring, dc.inv().ok_or(PgError::DivisionByZero)?);
        let lead_mono = Scalar { ring: self.ring.clone(), terms: [(dm.clone(), GaussianRational::one())].into() };
        let lead_mono_inv = lead_mono.inverse()?;
        let mut rem = self.clone();
        let mut quot = Scalar::zero(&self.ring);
        let mut steps = 0u64;
        while let Some((rm, rc)) = rem.terms.iter().next_back() {
            steps += 1;
            if steps > budget {
                return Err(PgError::InexactDivision);
            }
            let t = Scalar { ring: self.ring.clone(), terms: [(rm.clone(), rc.clone())].into() };
            let t = &(&t * &lead_mono_inv) * &lead_inv;
            for m in t.terms.keys() {
                let e = self.ring.effective_degrees(m);
                if e.iter().zip(&lo).zip(&hi).any(|((x, a), b)| x < a || x > b) {
                    return Err(PgError::InexactDivision);
                }
            }
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    /// Componentwise lowest and highest [`Ring::effective_degrees`].
    fn degree_span(&self) -> (Vec<i32>, Vec<i32>) {
        let mut it = self.terms.keys().map(|m| self.ring.effective_degrees(m));
        let first = it.next().expect("nonzero");
        it.fold((first.clone(), first), |(mut lo, mut hi), e| {
            for k in 0..e.len() {
                lo[k] = lo[k].min(e[k]);
                hi[k] = hi[k].max(e[k]);
            }
            (lo, hi)
        })
    }

    /// Real rational value, if the scalar is a real constant.
    pub fn as_real_constant(&self) -> Option<BigRational> {
        self.as_constant().filter(|c| c.is_real()).map(|c| c.re)
    }

    /// Sign of a real constant.
    pub fn real_sign(&self) -> Result<std::cmp::Ordering> {
        self.as_real_constant()
            .map(|r| r.cmp(&BigRational::zero()))
            .ok_or_else(|| PgError::NotConstant(self.to_string()))
    }
}

impl From<&Scalar> for Scalar {
    fn from(s: &Scalar) -> Self {
        s.clone()
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics if the operands live in different rings; see [`Scalar::checked_add`].
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar ring mismatch")
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar ring mismatch")
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar ring mismatch")
    }
}

impl Add<&Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        &self + rhs
    }
}

impl Sub<&Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        &self - rhs
    }
}

impl Mul<&Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        &self * rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::scalar_text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::WeightSpec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym() -> Ring {
        Ring::symbolic(3).unwrap()
    }

    #[test]
    fn free_commutative_product() {
        let r = sym();
        let qqb = &Scalar::q(&r) * &Scalar::qb(&r);
        let (m, c) = qqb.terms().next().unwrap();
        assert_eq!((m.q(), m.qb()), (1, 1));
        assert!(c.is_one());
        assert_eq!(qqb.n_terms(), 1);
    }

    #[test]
    fn laurent_identity() {
        let r = sym();
        assert!((&Scalar::q(&r) * &Scalar::q_pow(&r, -1)).is_one());
    }

    #[test]
    fn gaussian_coefficients() {
        let r = sym();
        let a = Scalar::constant(&r, GaussianRational::from_parts((1, 1), (1, 1)));
        let b = Scalar::constant(&r, GaussianRational::from_parts((1, 1), (-1, 1)));
        assert_eq!(&a * &b, Scalar::from_int(&r, 2));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = Scalar::one(&sym());
        let b = Scalar::one(&Ring::symbolic(4).unwrap());
        assert!(matches!(a.checked_add(&b), Err(PgError::DimensionMismatch { .. })));
        let real = sym().with_q_mode(QMode::Real).unwrap();
        assert_eq!(a.checked_mul(&Scalar::one(&real)), Err(PgError::RingMismatch));
    }

    #[test]
    fn conj_examples() {
        let r = sym();
        let z = Scalar::constant(&r, GaussianRational::from_parts((2, 1), (3, 1)));
        assert_eq!(z.conj(), Scalar::constant(&r, GaussianRational::from_parts((2, 1), (-3, 1))));
        assert_eq!(Scalar::q(&r).conj(), Scalar::qb(&r));
        let s = &Scalar::weight(&r, 0) * &Scalar::q_pow(&r, -1);
        let expect = &Scalar::weight(&r, 0) * &Scalar::qb_pow(&r, -1);
        assert_eq!(s.conj(), expect);
        // cross-check numerically
        let qv = Complex64::new(0.3, -1.7);
        let ws = [2.5, 1.0, 3.0];
        let lhs = s.conj().eval(qv, &ws).unwrap();
        let rhs = s.eval(qv, &ws).unwrap().conj();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn eval_examples() {
        let r = sym();
        let q = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        let v = (&Scalar::q(&r) * &Scalar::qb(&r)).eval(q, &[1.0; 3]).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let v = Scalar::q_pow(&r, -1).eval(Complex64::new(2.0, 0.0), &[1.0; 3]).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(
            Scalar::q_pow(&r, -1).eval(Complex64::new(0.0, 0.0), &[1.0; 3]),
            Err(PgError::DivisionByZero)
        );
    }

    #[test]
    fn reality_per_mode() {
        let r = sym();
        let s = &Scalar::q(&r) + &Scalar::qb(&r);
        assert!(s.is_real());
        assert!(!(&Scalar::i(&r) * &Scalar::q(&r)).is_real());
        let d = &Scalar::q(&r) - &Scalar::qb(&r);
        assert!(!d.is_real());
        assert!(d.fold_real().is_real());
        assert!(d.fold_real().is_zero());
    }

    #[test]
    fn half_powers_normalize() {
        let r = sym();
        let u = Scalar::weight_inv_sqrt(&r, 1);
        assert_eq!(&u * &u, Scalar::weight_pow(&r, 1, -1));
        assert!((&(&u * &u) * &Scalar::weight(&r, 1)).is_one());
        assert!((&u * &u.inverse().unwrap()).is_one());

        let ws = WeightSpec::from_ints(&[4, 2, 1]).unwrap();
        let rn = Ring::new(QMode::Symbolic, ws).unwrap();
        assert_eq!(Scalar::weight_inv_sqrt(&rn, 0), Scalar::constant(&rn, GaussianRational::from_ratio(1, 2)));
        let u1 = Scalar::weight_inv_sqrt(&rn, 1);
        assert_eq!(u1.n_terms(), 1);
        assert_eq!(&u1 * &u1, Scalar::constant(&rn, GaussianRational::from_ratio(1, 2)));
    }

    #[test]
    fn exact_division() {
        let r = sym();
        let a = &Scalar::q(&r) + &Scalar::weight(&r, 2);
        let b = &Scalar::qb_pow(&r, -1) - &Scalar::from_int(&r, 3);
        let p = &a * &b;
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert_eq!(a.div_exact(&b), Err(PgError::InexactDivision));
    }

    fn ring_for(mode: u8) -> Ring {
        match mode % 3 {
            0 => sym(),
            1 => sym().with_q_mode(QMode::Real).unwrap(),
            _ => sym().with_q_mode(QMode::Numeric(GaussianRational::from_parts((2, 3), (1, 2)))).unwrap(),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(seed in any::<u64>(), mode in 0u8..3) {
            let r = ring_for(mode);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = crate::random::scalar(&mut rng, &r);
            let b = crate::random::scalar(&mut rng, &r);
            let c = crate::random::scalar(&mut rng, &r);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn conj_is_multiplicative_involution(seed in any::<u64>(), mode in 0u8..3) {
            let r = ring_for(mode);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = crate::random::scalar(&mut rng, &r);
            let b = crate::random::scalar(&mut rng, &r);
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }

        #[test]
        fn eval_is_a_homomorphism(seed in any::<u64>()) {
            let r = sym();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = crate::random::scalar(&mut rng, &r);
            let b = crate::random::scalar(&mut rng, &r);
            let q = Complex64::new(0.7, -0.4);
            let ws = [1.5, 0.75, 2.0];
            let ev = |s: &Scalar| s.eval(q, &ws).unwrap();
            let close = |x: Complex64, y: Complex64| (x - y).norm() <= 1e-12 * (1.0 + x.norm().max(y.norm()));
            prop_assert!(close(ev(&(&a + &b)), ev(&a) + ev(&b)));
            prop_assert!(close(ev(&(&a * &b)), ev(&a) * ev(&b)));
            prop_assert!(close(ev(&a.conj()), ev(&a).conj()));
        }
    }
}
