//! Exact separated-variable operators for quantum integrable models built on
//! the trigonometric `U_q(sl_N)` R-matrix.
//!
//! The crate constructs a concrete monodromy `T(x)` over a finite-dimensional
//! quantum space, fuses auxiliary vector modules into q-antisymmetric modules
//! `w^k(x)`, and from there builds the operator polynomial `B(x)`, its
//! conjugate `D(x) = Y(x)^{-1} X(x)`, the separated roots `z_j` and the shift
//! operators `w_j`. Everything up to the B-coefficients and the `Y`/`X`
//! evaluators is computed in exact rational arithmetic; the spectral layer
//! switches to `f64`/`Complex<f64>`.
//!
//! Module map:
//!
//! | module        | content                                                  |
//! |---------------|----------------------------------------------------------|
//! | [`exactnum`]  | rationals, `QParam`, scalar structure functions          |
//! | [`tensorspace`] | dense exact matrices, labeled operator tensors, elimination |
//! | [`rmatrix`]   | constant and trigonometric R-matrices                    |
//! | [`fusion`]    | q-antisymmetrizers, fused modules, fused R-matrices      |
//! | [`monodromy`] | model configuration, `T(x)`, block relations, dressing   |
//! | [`sovcore`]   | fused covectors `b_{w^k}`, `B`, `Y`, `X`, identity checks |
//! | [`spectra`]   | interpolation, joint diagonalization, `w_j` exchange     |
//! | [`harness`]   | config parsing, suite orchestration, JSON reports        |

pub mod exactnum;
pub mod fusion;
pub mod harness;
pub mod monodromy;
pub mod rmatrix;
pub mod sovcore;
pub mod spectra;
pub mod tensorspace;

mod error;

pub use error::{Error, Result};
pub use exactnum::{QParam, Scalar};
