//! Comass computations for constant-coefficient forms on R^n, with the
//! E7 = sl(8) ⊕ Λ⁴(8) bracket model used to reduce self-dual 4-forms on R^8
//! to a seven-dimensional Cartan subspace.

pub mod canonical2;
pub mod cli;
pub mod comass;
pub mod e7;
pub mod error;
pub mod exterior;
pub mod hunt;
pub mod linalg;
pub mod named;
pub mod scalar;
pub mod wirtinger;

pub use error::{Error, Result};
pub use exterior::{AnyForm, ExactForm, FloatForm, Frame, KForm, MultiIndex};
pub use scalar::{Rational, Scalar, ScalarKind};
