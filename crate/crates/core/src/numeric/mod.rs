//! Complex dense linear algebra: the matrix type, tolerances, and the three
//! spectral primitives (Hermitian eigendecomposition, SVD, pseudoinverse).
//!
//! All routines are deterministic: fixed sweep order, no random starts.

mod eig;
mod matrix;
mod svd;
mod tolerances;

pub use eig::{hermitian_eig, HermitianEigen};
pub use matrix::{inner, norm, vec_is_finite, DenseMatrix};
pub use svd::{pinv, pinv_from_svd, svd, Svd};
pub use tolerances::{RankCutoff, Tolerances};

pub use num_complex::Complex64;
