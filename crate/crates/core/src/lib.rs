//! Exact computation with filtered algebras of left differential operators
//! on finite-dimensional associative algebras, plus the symbolic divided-power
//! calculus on polynomial rings and truncated free algebras that feeds it.
//!
//! Everything is computed over arbitrary-precision rationals (or integers in
//! ℤ-mode); there is no floating point anywhere in this crate.
//!
//! The main entry points are:
//!
//! * [`algebra::Algebra`] — a finite-dimensional unital associative algebra
//!   given by structure constants, with presets for the usual test algebras.
//! * [`filtration::commutative_filtration`] and
//!   [`filtration::noncommutative_filtration`] — the operator filtrations
//!   D₀ ⊆ D₁ ⊆ … inside End(A), by commutator recursion.
//! * [`principal_parts::build`] — the principal-parts construction
//!   Pⁿ = (A⊗A)/Jⁿ⁺¹ and the operators it induces, an independent route to
//!   the same subspaces on commutative algebras.
//! * [`diffop::DPOp`] — divided-power differential operators on `k[X]` and
//!   `k[X,Y]`, with exact composition and the integrality test.
//! * [`free`] — truncated free algebras, free products, multimorphisms and
//!   Hasse–Schmidt sequences.
//! * [`report`] — the command layer shared by the CLI and the browser demo.

pub mod algebra;
pub mod diffop;
pub mod filtration;
pub mod free;
pub mod linalg;
pub mod principal_parts;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod spec;

pub use scalar::{Int, Rat};
