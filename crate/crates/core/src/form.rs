//! The weight `w(th, thb)` and the sesquilinear form it defines.
//!
//! Two independent routes compute `<f, g>_w`: [`inner_closed`] uses the
//! closed formula `<th^a thb^b, th^c thb^d> = [a+d = b+c < l] w_{a+d}`, and
//! [`inner_berezin`] expands the anti-Wick-ordered Berezin integral
//! directly. They must agree on every input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{PgError, Result};
use crate::pg::{PgElement, Subspace, Var};
use crate::scalar::{GaussianRational, QMode, Ring, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightValues {
    /// Weights are the real symbols `w_0 .. w_{l-1}`, assumed positive.
    Symbolic,
    /// Exact nonzero rationals `w_0 .. w_{l-1}`.
    Numeric(Vec<BigRational>),
}

/// The weight data `w_0 .. w_{l-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpec {
    l: usize,
    values: WeightValues,
}

impl WeightSpec {
    pub fn symbolic(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(PgError::InvalidOrder(l));
        }
        Ok(WeightSpec { l, values: WeightValues::Symbolic })
    }

    pub fn numeric(values: Vec<BigRational>) -> Result<Self> {
        let l = values.len();
        if l < 2 {
            return Err(PgError::InvalidOrder(l));
        }
        if let Some(n) = values.iter().position(Zero::is_zero) {
            return Err(PgError::SingularWeight(n));
        }
        Ok(WeightSpec { l, values: WeightValues::Numeric(values) })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::numeric(values.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
    }

    /// `w_n = 1`.
    pub fn ones(l: usize) -> Result<Self> {
        Self::from_ints(&vec![1; l])
    }

    /// `w_n = n!`.
    pub fn factorial(l: usize) -> Result<Self> {
        let mut acc = BigInt::one();
        let mut out = Vec::with_capacity(l);
        for n in 0..l {
            if n > 0 {
                acc *= BigInt::from(n);
            }
            out.push(BigRational::from_integer(acc.clone()));
        }
        Self::numeric(out)
    }

    /// `w_n = [n]_q!` with `[k]_q = 1 + q + ... + q^{k-1}`, for a real
    /// numeric `q` making every value positive.
    pub fn q_factorial(l: usize, q: &GaussianRational) -> Result<Self> {
        if !q.is_real() {
            return Err(PgError::Unsupported("q-factorial weights need a real numeric q".into()));
        }
        let q = &q.re;
        let mut acc = BigRational::one();
        let mut out = Vec::with_capacity(l);
        for n in 0..l {
            if n > 0 {
                let mut bracket = BigRational::zero();
                let mut p = BigRational::one();
                for _ in 0..n {
                    bracket += &p;
                    p *= q;
                }
                acc *= bracket;
            }
            if !acc.is_positive() {
                return Err(PgError::Unsupported(format!("[{n}]_q! is not positive for q = {q}")));
            }
            out.push(acc.clone());
        }
        Self::numeric(out)
    }

    /// Parses the command-line weight syntax: `"1,1,2"`, `"preset:ones"`,
    /// `"preset:factorial"`, `"preset:qfactorial"` or `"symbolic"`.
    pub fn parse(text: &str, l: usize, q: &QMode) -> Result<Self> {
        let text = text.trim();
        match text {
            "symbolic" => Self::symbolic(l),
            "preset:ones" => Self::ones(l),
            "preset:factorial" => Self::factorial(l),
            "preset:qfactorial" => match q {
                QMode::Numeric(v) => Self::q_factorial(l, v),
                _ => Err(PgError::Unsupported("q-factorial weights need a numeric q".into())),
            },
            _ => {
                let values = text
                    .split(',')
                    .map(|s| {
                        s.trim().parse::<BigRational>().map_err(|_| {
                            PgError::Unsupported(format!("cannot read weight {:?}", s.trim()))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if values.len() != l {
                    return Err(PgError::LengthMismatch { expected: l, found: values.len() });
                }
                Self::numeric(values)
            }
        }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn values(&self) -> &WeightValues {
        &self.values
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.values, WeightValues::Symbolic)
    }

    /// Positivity flag; symbolic weights count as positive.
    pub fn is_positive(&self) -> bool {
        match &self.values {
            WeightValues::Symbolic => true,
            WeightValues::Numeric(v) => v.iter().all(Signed::is_positive),
        }
    }
}

/// `w(th, thb) = sum_m w_{l-1-m} th^m thb^m`.
pub fn weight_element(ring: &Ring) -> PgElement {
    let l = ring.l();
    PgElement::from_fn(ring, Var::theta(), |i, j| {
        if i == j { Scalar::weight(ring, l - 1 - i) } else { Scalar::zero(ring) }
    })
}

/// The closed formula on anti-Wick basis elements, extended anti-linearly in
/// `f` and linearly in `g`.
pub fn inner_closed(f: &PgElement, g: &PgElement) -> Result<Scalar> {
    f.ensure_compatible(g)?;
    let ring = f.ring();
    let l = f.l();
    let mut acc = Scalar::zero(ring);
    for (a, b, x) in f.terms() {
        for (c, d, y) in g.terms() {
            if a + d == b + c && a + d < l {
                acc = acc + &(&(&x.conj() * y) * &Scalar::weight(ring, a + d));
            }
        }
    }
    Ok(acc)
}

/// `sum_m w_{l-1-m} Int th^m :f^*: :g: thb^m`, computed with the algebra
/// product and the Berezin integral.
pub fn inner_berezin(f: &PgElement, g: &PgElement) -> Result<Scalar> {
    f.ensure_compatible(g)?;
    let ring = f.ring();
    let l = f.l();
    let ordered = f.star().anti_wick_product(g)?;
    let mut acc = Scalar::zero(ring);
    for m in 0..l {
        let left = PgElement::basis(ring, m, 0)?.with_var(f.var().clone()).with_param(f.param());
        let right = PgElement::basis(ring, 0, m)?.with_var(f.var().clone()).with_param(f.param());
        let integrand = left.mul(&ordered)?.mul(&right)?;
        acc = acc + &(&Scalar::weight(ring, l - 1 - m) * &integrand.berezin_integral());
    }
    Ok(acc)
}

/// `||f||_w^2 = <f, f>_w`, always real and possibly negative.
pub fn norm_squared(f: &PgElement) -> Result<Scalar> {
    inner_closed(f, f)
}

/// `1 + beta th^{l-1} thb^{l-1}` with `beta = -w_0 / w_{l-1}`, whose square
/// norm is `-w_0 < 0`.
pub fn negative_norm_witness(ring: &Ring) -> Result<PgElement> {
    let weights = ring.weights();
    if weights.is_symbolic() {
        return Err(PgError::Unsupported("sign tests need numeric weights".into()));
    }
    if !weights.is_positive() {
        return Err(PgError::NotHilbert(Subspace::Full));
    }
    let l = ring.l();
    let beta = -(&Scalar::weight(ring, 0) * &Scalar::weight_pow(ring, l - 1, -1));
    Ok(&PgElement::one(ring) + &PgElement::basis(ring, l - 1, l - 1)?.scale(&beta))
}

/// `phi_n = w_n^{-1/2} th^n`.
pub fn phi(ring: &Ring, n: usize) -> Result<PgElement> {
    if !ring.weights().is_positive() {
        return Err(PgError::NotHilbert(Subspace::Holomorphic));
    }
    Ok(PgElement::basis(ring, n, 0)?.scale(&Scalar::weight_inv_sqrt(ring, n)))
}

/// Orthonormal basis of `B_H` (`phi_n`), `B_AH` (`phi_n^*`) or `S`
/// (`phi_n` together with `phi_n^*` for `n >= 1`).
pub fn phi_basis(ring: &Ring, subspace: Subspace) -> Result<Vec<PgElement>> {
    if !ring.weights().is_positive() || subspace == Subspace::Full {
        return Err(PgError::NotHilbert(subspace));
    }
    let l = ring.l();
    let hol = (0..l).map(|n| phi(ring, n)).collect::<Result<Vec<_>>>()?;
    Ok(match subspace {
        Subspace::Holomorphic => hol,
        Subspace::AntiHolomorphic => hol.iter().map(PgElement::star).collect(),
        Subspace::SpanS => {
            let stars: Vec<_> = hol[1..].iter().map(PgElement::star).collect();
            hol.into_iter().chain(stars).collect()
        }
        Subspace::Full => unreachable!(),
    })
}
