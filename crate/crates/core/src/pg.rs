//! Elements of the paragrassmann algebra `PG_{l,q}`.
//!
//! An element is stored as the dense `l x l` array of its coefficients in the
//! anti-Wick basis `th^i thb^j`. Products are reduced with the basis rule
//!
//! ```text
//! th^i thb^j * th^k thb^m = q^{-jk} th^{i+k} thb^{j+m}
//! ```
//!
//! and truncated as soon as an exponent reaches `l`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{PgError, Result};
use crate::scalar::{GaussianRational, Ring, Scalar};

/// Name of a paragrassmann variable pair, e.g. `th`/`thb` or `eta`/`etab`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn theta() -> Self {
        Var::new("th")
    }

    pub fn eta() -> Self {
        Var::new("eta")
    }

    pub fn rho() -> Self {
        Var::new("rho")
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn bar_name(&self) -> String {
        format!("{}b", self.0)
    }

    pub fn latex(&self) -> String {
        match self.0.as_str() {
            "th" => "\\theta".into(),
            "eta" | "rho" | "xi" | "zeta" => format!("\\{}", self.0),
            other => other.to_string(),
        }
    }

    pub fn latex_bar(&self) -> String {
        format!("\\overline{{{}}}", self.latex())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The distinguished subspaces of `PG_{l,q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subspace {
    /// `B_H`: span of `th^i`.
    Holomorphic,
    /// `B_AH`: span of `thb^j`.
    AntiHolomorphic,
    /// `S = B_H + B_AH`.
    SpanS,
    Full,
}

impl Subspace {
    pub fn contains_index(self, i: usize, j: usize) -> bool {
        match self {
            Subspace::Holomorphic => j == 0,
            Subspace::AntiHolomorphic => i == 0,
            Subspace::SpanS => i == 0 || j == 0,
            Subspace::Full => true,
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subspace::Holomorphic => "B_H",
            Subspace::AntiHolomorphic => "B_AH",
            Subspace::SpanS => "S",
            Subspace::Full => "PG",
        })
    }
}

/// Which deformation parameter governs the product: `q` or `q^{-1}`.
///
/// The swap isomorphism lands in `PG_{l,q^{-1}}`, whose elements carry
/// [`Deformation::Inverse`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Deformation {
    Direct,
    Inverse,
}

impl Deformation {
    pub fn flipped(self) -> Self {
        match self {
            Deformation::Direct => Deformation::Inverse,
            Deformation::Inverse => Deformation::Direct,
        }
    }

    /// Exponent of `q` for the effective parameter raised to `n`.
    fn q_exp(self, n: i32) -> i32 {
        match self {
            Deformation::Direct => n,
            Deformation::Inverse => -n,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PgElement {
    ring: Ring,
    var: Var,
    param: Deformation,
    coeffs: Vec<Scalar>,
}

impl PgElement {
    pub fn zero(ring: &Ring) -> Self {
        Self::zero_in(ring, Var::theta())
    }

    pub fn zero_in(ring: &Ring, var: Var) -> Self {
        let l = ring.l();
        PgElement {
            ring: ring.clone(),
            var,
            param: Deformation::Direct,
            coeffs: vec![Scalar::zero(ring); l * l],
        }
    }

    pub fn from_fn(ring: &Ring, var: Var, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut out = Self::zero_in(ring, var);
        let l = ring.l();
        for i in 0..l {
            for j in 0..l {
                let s = f(i, j);
                assert_eq!(s.ring(), ring, "coefficient from a different ring");
                out.coeffs[i * l + j] = s;
            }
        }
        out
    }

    pub fn one(ring: &Ring) -> Self {
        Self::from_scalar(Scalar::one(ring))
    }

    /// `s * 1`.
    pub fn from_scalar(s: Scalar) -> Self {
        let mut out = Self::zero(s.ring());
        out.coeffs[0] = s;
        out
    }

    /// The anti-Wick basis element `th^i thb^j`.
    pub fn basis(ring: &Ring, i: usize, j: usize) -> Result<Self> {
        let l = ring.l();
        if i >= l || j >= l {
            return Err(PgError::IndexOutOfRange { i, j, l });
        }
        let mut out = Self::zero(ring);
        out.coeffs[i * l + j] = Scalar::one(ring);
        Ok(out)
    }

    pub fn theta(ring: &Ring) -> Self {
        Self::basis(ring, 1, 0).expect("l >= 2")
    }

    pub fn theta_bar(ring: &Ring) -> Self {
        Self::basis(ring, 0, 1).expect("l >= 2")
    }

    /// Anti-Wick normal form of the Wick basis element `thb^i th^j`,
    /// namely `q^{-ij} th^j thb^i`.
    pub fn wick_monomial(ring: &Ring, i: usize, j: usize) -> Result<Self> {
        let mut out = Self::basis(ring, j, i)?;
        let e = -((i * j) as i32);
        out.coeffs[j * ring.l() + i] = Scalar::q_pow(ring, e);
        Ok(out)
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub(crate) fn with_param(mut self, param: Deformation) -> Self {
        self.param = param;
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn l(&self) -> usize {
        self.ring.l()
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn param(&self) -> Deformation {
        self.param
    }

    /// Coefficient of `th^i thb^j`; panics when out of range.
    pub fn coeff(&self, i: usize, j: usize) -> &Scalar {
        &self.coeffs[i * self.l() + j]
    }

    /// Nonzero coefficients as `(i, j, coefficient)`, row-major.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        let l = self.l();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (k / l, k % l, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn in_subspace(&self, s: Subspace) -> bool {
        self.terms().all(|(i, j, _)| s.contains_index(i, j))
    }

    /// Smallest distinguished subspace containing the element.
    pub fn subspace(&self) -> Subspace {
        [Subspace::Holomorphic, Subspace::AntiHolomorphic, Subspace::SpanS]
            .into_iter()
            .find(|s| self.in_subspace(*s))
            .unwrap_or(Subspace::Full)
    }

    pub(crate) fn ensure_compatible(&self, other: &PgElement) -> Result<()> {
        self.ring.ensure_same(&other.ring)?;
        if self.var != other.var {
            return Err(PgError::VariableMismatch {
                expected: self.var.to_string(),
                found: other.var.to_string(),
            });
        }
        if self.param != other.param {
            return Err(PgError::ParamMismatch);
        }
        Ok(())
    }

    fn zip(&self, other: &PgElement, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<PgElement> {
        self.ensure_compatible(other)?;
        let mut out = self.clone();
        for (slot, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *slot = f(slot, b);
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &PgElement) -> Result<PgElement> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &PgElement) -> Result<PgElement> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> PgElement {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = &*c * s;
        }
        out
    }

    /// The algebra product, reduced to anti-Wick normal form.
    pub fn mul(&self, other: &PgElement) -> Result<PgElement> {
        self.ensure_compatible(other)?;
        let l = self.l();
        let max_e = ((l - 1) * (l - 1)) as i32;
        let q_powers: Vec<Scalar> = (0..=max_e)
            .map(|n| Scalar::q_pow(&self.ring, self.param.q_exp(-n)))
            .collect();
        let mut out = PgElement { coeffs: vec![Scalar::zero(&self.ring); l * l], ..self.clone() };
        for (i, j, a) in self.terms() {
            for (k, m, b) in other.terms() {
                if i + k >= l || j + m >= l {
                    continue;
                }
                let mut c = a * b;
                if j * k != 0 {
                    c = &c * &q_powers[j * k];
                }
                let slot = &mut out.coeffs[(i + k) * l + j + m];
                *slot = &*slot + &c;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> PgElement {
        let mut acc = PgElement::one(&self.ring).with_var(self.var.clone()).with_param(self.param);
        for _ in 0..n {
            acc = acc.mul(self).expect("same algebra");
        }
        acc
    }

    /// The conjugation `sum f_ij th^i thb^j -> sum conj(f_ij) th^j thb^i`.
    pub fn star(&self) -> PgElement {
        let l = self.l();
        let mut out = self.clone();
        for i in 0..l {
            for j in 0..l {
                out.coeffs[j * l + i] = self.coeffs[i * l + j].conj();
            }
        }
        out
    }

    /// The commutative anti-Wick product `:th^a thb^b: :th^c thb^d: = th^{a+c} thb^{b+d}`.
    pub fn anti_wick_product(&self, other: &PgElement) -> Result<PgElement> {
        self.ensure_compatible(other)?;
        let l = self.l();
        let mut out = PgElement { coeffs: vec![Scalar::zero(&self.ring); l * l], ..self.clone() };
        for (a, b, x) in self.terms() {
            for (c, d, y) in other.terms() {
                if a + c < l && b + d < l {
                    let slot = &mut out.coeffs[(a + c) * l + b + d];
                    *slot = &*slot + &(x * y);
                }
            }
        }
        Ok(out)
    }

    /// The Berezin integral: coefficient of `th^{l-1} thb^{l-1}`.
    pub fn berezin_integral(&self) -> Scalar {
        let l = self.l();
        self.coeff(l - 1, l - 1).clone()
    }

    /// The isomorphism `PG_{l,q} -> PG_{l,q^{-1}}` induced by `th <-> thb`.
    ///
    /// `th^i thb^j` maps to `thb^i th^j`, which in the target algebra has
    /// anti-Wick form `(q')^{-ij} th^j thb^i` with `q'` the target parameter.
    pub fn swap_iso(&self) -> PgElement {
        let l = self.l();
        let target = self.param.flipped();
        let mut out = PgElement { coeffs: vec![Scalar::zero(&self.ring); l * l], ..self.clone() };
        out.param = target;
        for (i, j, c) in self.terms() {
            let e = target.q_exp(-((i * j) as i32));
            out.coeffs[j * l + i] = if e == 0 { c.clone() } else { c * &Scalar::q_pow(&self.ring, e) };
        }
        out
    }

    /// Retags the element from variable `from` to variable `to`.
    pub fn substitute(&self, from: &Var, to: &Var) -> Result<PgElement> {
        if &self.var != from {
            return Err(PgError::VariableMismatch { expected: from.to_string(), found: self.var.to_string() });
        }
        Ok(self.clone().with_var(to.clone()))
    }

    /// Image of every coefficient under `qb -> q`.
    pub fn fold_real(&self) -> PgElement {
        let coeffs: Vec<Scalar> = self.coeffs.iter().map(Scalar::fold_real).collect();
        let ring = coeffs[0].ring().clone();
        PgElement { ring, var: self.var.clone(), param: self.param, coeffs }
    }
}

/// Anti-Wick index pairs `(i, j)` sorted by total degree, then by `i`
/// descending: `1, th, thb, th thb, th^2, ...`.
pub fn basis_order(l: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..l).flat_map(|i| (0..l).map(move |j| (i, j))).collect();
    out.sort_by_key(|&(i, j)| (i + j, std::cmp::Reverse(i)));
    out
}

/// `f(a) = sum_j beta_j a^j`, evaluated by Horner's rule with the algebra product.
pub fn poly_calculus(coeffs: &[GaussianRational], target: &PgElement) -> PgElement {
    let ring = target.ring();
    let base = PgElement::zero_in(ring, target.var().clone()).with_param(target.param());
    coeffs.iter().rev().fold(base, |acc, c| {
        let mut next = acc.mul(target).expect("same algebra");
        next.coeffs[0] = &next.coeffs[0] + &Scalar::constant(ring, c.clone());
        next
    })
}

impl Add<&PgElement> for &PgElement {
    type Output = PgElement;
    /// Panics on incompatible operands; see [`PgElement::checked_add`].
    fn add(self, rhs: &PgElement) -> PgElement {
        self.checked_add(rhs).expect("incompatible algebra elements")
    }
}

impl Sub<&PgElement> for &PgElement {
    type Output = PgElement;
    fn sub(self, rhs: &PgElement) -> PgElement {
        self.checked_sub(rhs).expect("incompatible algebra elements")
    }
}

impl Neg for &PgElement {
    type Output = PgElement;
    fn neg(self) -> PgElement {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -&*c;
        }
        out
    }
}

impl fmt::Debug for PgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PgElement[l={}, {}, {:?}]({})", self.l(), self.var, self.param, self)
    }
}

impl fmt::Display for PgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::element_text(self))
    }
}
