//! Exact verification engine for double (quasi-)Poisson algebras and the
//! pre-Calabi-Yau A-infinity structures they induce on `A ⊕ A^#[-1]`.
//!
//! Every scalar is an exact rational; no floating point is used anywhere.

pub mod ainfty;
pub mod algebra;
pub mod bracket;
pub mod error;
pub mod exact_arith;
pub mod format;
pub mod identities;
pub mod sparse;
pub mod stasheff;

pub use ainfty::Structure;
pub use algebra::{AlgElem, Algebra, DualElem, MixedTuple, PhiElem, Slot};
pub use bracket::{DoubleBracket, TensorElem};
pub use error::{Error, Result};
pub use exact_arith::{bernoulli, binomial, c_coeff, CCoeffTable, Rational};
