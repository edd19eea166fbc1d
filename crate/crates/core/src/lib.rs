//! Symbolic analysis of additive functional equations of the form
//! `Σ fᵢ^{qᵢ}(x^{pᵢ}) = 0` over characteristic-zero fields.
//!
//! The crate is layered bottom-up:
//!
//! * [`expr`]: exact rationals, multi-indices and the sparse symbolic
//!   polynomial ring over homomorphism symbols `phiJ(v)` and
//!   logarithmic-derivative symbols `aR(v)`.
//! * [`equation`]: the equation DSL, exponent profiles and degree splitting.
//! * [`symmetrize`]: identities obtained by evaluating the symmetrized
//!   multiadditive form at substitution patterns, with a permutation oracle.
//! * [`ansatz`]: homomorphism-basis expansion, monomial constraint systems
//!   and partition solution families.
//! * [`verify`]: exact residuals of symbolic candidates.
//! * [`fieldlab`]: concrete exact fields `Q(√d)` and `Q(t)` used as a
//!   semantic oracle.

pub mod ansatz;
pub mod equation;
pub mod error;
pub mod expr;
pub mod fieldlab;
pub mod symmetrize;
pub mod verify;

pub use error::{Error, Result};
