//! Nichols algebras of diagonal type over cyclotomic fields.
//!
//! The crate builds Nichols algebras `B(V)` of finite-dimensional braided
//! vector spaces of diagonal type, their PBW bases of hard super-letters, and
//! the braided Lie algebras of primitive-like elements inside them. Everything
//! is exact: scalars live in `Q(ζ_M)`.

pub mod braiding;
pub mod cartan;
pub mod cli;
pub mod freealg;
pub mod liealg;
pub mod linalg;
pub mod nichols;
pub mod scalar;
pub mod words;

pub use scalar::CycScalar;
