//! Exact computer algebra for the paragrassmann algebra `PG_{l,q}`.
//!
//! The algebra is generated by `th`, `thb` subject to `th^l = thb^l = 0`
//! and `th thb = q thb th`. Elements live in anti-Wick normal form over
//! exact [`Scalar`] coefficients. On top of the algebra the crate provides
//! the weighted sesquilinear form, the reproducing kernels of the
//! Segal-Bargmann subspace and of the whole algebra, coherent states and the
//! Segal-Bargmann transform.
//!
//! ```
//! use paragrassmann::{expr, Ring};
//!
//! let ring = Ring::symbolic(3).unwrap();
//! let f = expr::eval_ast(&expr::parse("thb*th").unwrap(), &ring).unwrap();
//! assert_eq!(f.to_string(), "q^-1*th*thb");
//! ```

pub mod coherent;
pub mod error;
pub mod expr;
pub mod form;
pub mod gram;
pub mod kernel;
pub mod linalg;
pub mod pg;
pub mod random;
pub mod render;
pub mod scalar;

pub use error::{PgError, Result};
pub use form::{WeightSpec, WeightValues};
pub use gram::GramMatrix;
pub use kernel::{OperatorOnBH, TensorElement};
pub use pg::{PgElement, Subspace, Var};
pub use scalar::{GaussianRational, QMode, Ring, Scalar};
