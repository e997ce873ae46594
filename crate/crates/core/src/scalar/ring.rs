use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::GaussianRational;
use crate::error::{PgError, Result};
use crate::form::WeightSpec;

/// How the deformation parameter `q` is represented in coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QMode {
    /// `q` and `qb` are independent commuting symbols.
    Symbolic,
    /// `qb` is identified with `q` (q real).
    Real,
    /// `q` is a fixed nonzero Gaussian rational.
    Numeric(GaussianRational),
}

impl QMode {
    /// True when conjugation fixes `q`.
    pub fn is_real(&self) -> bool {
        match self {
            QMode::Symbolic => false,
            QMode::Real => true,
            QMode::Numeric(v) => v.is_real(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            QMode::Symbolic => "symbolic",
            QMode::Real => "real",
            QMode::Numeric(_) => "numeric",
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
struct RingInner {
    l: usize,
    q: QMode,
    weights: WeightSpec,
}

/// The symbol environment every [`Scalar`](super::Scalar) lives in: the
/// nilpotency order `l`, the `q` representation and the weight data.
///
/// Cheap to clone; equality is structural.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

impl Ring {
    pub fn new(q: QMode, weights: WeightSpec) -> Result<Self> {
        let l = weights.l();
        if l < 2 {
            return Err(PgError::InvalidOrder(l));
        }
        if let QMode::Numeric(v) = &q {
            if v.is_zero() {
                return Err(PgError::DivisionByZero);
            }
        }
        Ok(Ring(Arc::new(RingInner { l, q, weights })))
    }

    /// Symbolic `q`, `qb` and symbolic weights.
    pub fn symbolic(l: usize) -> Result<Self> {
        Self::new(QMode::Symbolic, WeightSpec::symbolic(l)?)
    }

    pub fn l(&self) -> usize {
        self.0.l
    }

    pub fn q_mode(&self) -> &QMode {
        &self.0.q
    }

    pub fn weights(&self) -> &WeightSpec {
        &self.0.weights
    }

    pub fn with_q_mode(&self, q: QMode) -> Result<Self> {
        Self::new(q, self.0.weights.clone())
    }

    pub fn with_weights(&self, weights: WeightSpec) -> Result<Self> {
        Self::new(self.0.q.clone(), weights)
    }

    pub(crate) fn n_vars(&self) -> usize {
        2 + 2 * self.0.l
    }

    /// Degrees that add under multiplication: `q`, `qb` and, for symbolic
    /// weights, `2 w_n - u_n` (the power of `w_n^{1/2}`).
    pub(crate) fn effective_degrees(&self, m: &super::Monomial) -> Vec<i32> {
        let mut out = vec![m.q(), m.qb()];
        if self.0.weights.is_symbolic() {
            out.extend((0..self.0.l).map(|n| 2 * m.w(n) - m.u(n)));
        }
        out
    }

    pub(crate) fn ensure_same(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else if self.l() != other.l() {
            Err(PgError::DimensionMismatch { left: self.l(), right: other.l() })
        } else {
            Err(PgError::RingMismatch)
        }
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring")
            .field("l", &self.0.l)
            .field("q", &self.0.q)
            .field("weights", &self.0.weights)
            .finish()
    }
}
