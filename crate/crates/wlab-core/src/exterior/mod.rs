//! Exact and floating-point exterior algebra on R^n.

mod form;
mod frame;
mod index;
pub mod json;

pub use form::{linear_combination, ExactForm, FloatForm, KForm};
pub use frame::{orthonormality_defect, Frame, FRAME_TOL};
pub(crate) use frame::det_small;
pub use index::{shuffle_sign, subsets, MultiIndex, MAX_DIM};
pub use json::AnyForm;
