//! Exact dense linear algebra and labeled operator tensors.
//!
//! Heavy computations work on [`Mat`] with documented index layouts; the
//! labeled [`OpTensor`] wraps results for dumps and for contractions where
//! slot bookkeeping matters more than speed.

mod elim;
mod labeled;
mod mat;
mod poly;

pub use elim::{
    determinant_is_zero, image_basis, inverse, is_scalar_multiple_of_identity, kernel_basis, left_inverse,
    proportionality, rank, solve_exact,
};
pub use labeled::{LabeledSpace, OpTensor, Slot, SpaceKind, Variance};
pub use mat::{embed_two, Mat};
pub use poly::{evaluate as evaluate_polynomial, lagrange_coefficients};
