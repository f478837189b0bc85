//! Exact linear algebra over ℚ and ℤ: dense rational matrices, canonical
//! (reduced row echelon) subspaces, and Hermite-normal-form integer lattices.
//!
//! Subspaces and lattices are stored in canonical form, so equality of spans
//! is plain data equality. Elimination clears denominators and works on
//! integer rows internally; all public output is in reduced fractions.

mod lattice;
mod matrix;
mod rref;
mod subspace;

pub use lattice::{integer_kernel, IntegerLattice};
pub use matrix::RatMatrix;
pub use subspace::Subspace;

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinalgError {
    /// A vector's length does not match the expected ambient dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// Two subspaces/lattices live in different ambient spaces.
    AmbientMismatch { left: usize, right: usize },
    /// Matrix shapes are incompatible for the requested operation.
    ShapeMismatch { detail: String },
    /// The ambient dimension is not a perfect square, so vectors cannot be
    /// reinterpreted as square matrices.
    NotSquareAmbient { ambient: usize },
    /// Integer-only context received a non-integer entry.
    NonIntegerEntry,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::DimensionMismatch { expected, found } => {
                write!(
                    f,
                    "vector of length {found} in ambient dimension {expected}"
                )
            }
            LinalgError::AmbientMismatch { left, right } => {
                write!(f, "ambient dimensions differ: {left} vs {right}")
            }
            LinalgError::ShapeMismatch { detail } => write!(f, "shape mismatch: {detail}"),
            LinalgError::NotSquareAmbient { ambient } => {
                write!(f, "ambient dimension {ambient} is not a perfect square")
            }
            LinalgError::NonIntegerEntry => write!(f, "non-integer entry in integer context"),
        }
    }
}

impl std::error::Error for LinalgError {}

/// Exact integer square root test: `Some(n)` iff `ambient == n * n`.
pub(crate) fn square_side(ambient: usize) -> Option<usize> {
    let mut n = (ambient as f64).sqrt() as usize;
    while n * n < ambient {
        n += 1;
    }
    while n > 0 && n * n > ambient {
        n -= 1;
    }
    if n * n == ambient {
        Some(n)
    } else {
        None
    }
}
