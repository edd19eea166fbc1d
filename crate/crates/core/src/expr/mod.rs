//! Exact arithmetic kernel.
//!
//! Every other module computes in the ring [`SymPoly`]: sparse polynomials
//! whose variables are formal symbols `phiJ(v)` (homomorphisms) and
//! `aR(v)` (logarithmic derivatives `d(v)/v`) and whose coefficients are
//! [`UnknownPoly`]s, exact polynomials over `Q` in named unknown constants.

mod multi_index;
mod rational;
mod symbol;
mod sympoly;
mod unknown;

pub use multi_index::MultiIndex;
pub use rational::{binomial, factorial, int, multinomial, rat, render_rational, Rational};
pub use symbol::{base_var_name, SymbolId, SymbolKind, Universe};
pub use sympoly::{poly_arith, ArithOp, SymPoly};
pub use unknown::UnknownPoly;
