//! Frames, atomic systems for operators, and sampling certificates on
//! reproducing-kernel Hilbert spaces (Bergman, weighted Bergman, Fock).
//!
//! Infinite-dimensional statements are modelled on finite truncations; every
//! certificate produced here is valid for the finite model it was computed on.

pub mod atomic;
pub mod error;
pub mod frames;
pub mod kernels;
pub mod numeric;
pub mod random;
pub mod sampling;

pub use error::{Error, Result};
pub use numeric::{Complex64, DenseMatrix, Tolerances};
