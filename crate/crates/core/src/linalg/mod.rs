//! Exact linear algebra over ℚ for symmetric bilinear forms.

mod form;
mod inertia;
mod matrix;
mod rat;
mod sturm;
mod subspace;

use thiserror::Error;

pub use form::BilinearForm;
#[doc(hidden)]
pub use inertia::{inertia_congruence_with, Fault};
pub use inertia::{inertia_congruence, Inertia};
pub use matrix::{det, null_space, rank, rref, Mat};
pub use rat::{format_rat, format_vec, parse_rat, parse_vec, primitive, primitive_integers, rat, ratio, sign, Rat};
pub use sturm::{characteristic_polynomial, inertia_sturm, square_free_decomposition, Poly};
pub use subspace::Subspace;
pub(crate) use rat::sum_of_products;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form matrix is singular")]
    Degenerate,
    #[error("{0}")]
    Parse(String),
}
