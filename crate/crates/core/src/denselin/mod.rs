//! Dense complex linear algebra at desk scale.
//!
//! [`CMatrix`] is a row-major matrix of `Complex64`. The factorizations are
//! Jacobi based: a cyclic two-sided Jacobi solver for Hermitian matrices and a
//! one-sided (Hestenes) Jacobi SVD, from which the polar decomposition and the
//! spectral norm are derived.

mod eigen;
mod gram;
mod matrix;
mod svd;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use gram::{gram_schmidt, inner, vec_norm, OrthoSpan};
pub use matrix::{kron, CMatrix, MAX_TENSOR_DIM};
pub use svd::{polar, singular_values, spectral_norm, svd, Polar, SingularValues, Svd};

pub use num_complex::Complex64;

/// Default absolute tolerance for complex comparisons.
pub const ABS_TOL: f64 = 1e-9;
