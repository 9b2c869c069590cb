//! Exact verification engine for the operator-algebraic identities behind the
//! K-theory of multipullback quantum complex projective spaces.
//!
//! The crate computes in the dense polynomial *-subalgebras of Toeplitz tensor
//! algebras and their quotients by joint compact ideals, checks generator-level
//! *-homomorphisms and commuting squares between graph C*-algebra presentations
//! and multipullback quantum spheres, and reproduces the K₀ ledger of line
//! bundle classes as exact integer vectors. A truncated sparse-matrix backend
//! provides an independent numeric cross-check.
//!
//! Layout:
//! - [`toeplitz`]: one Toeplitz factor (shift powers and matrix units).
//! - [`tensor`]: tensor products, sphere quotients, gauge moves, matrices.
//! - [`presentations`]: graphs, Cuntz–Krieger checks, named maps, squares.
//! - [`ktheory`]: projections, unitary witnesses, K₀ vectors, identities.
//! - [`numeric`]: truncated matrices and interior-window comparison.
//! - [`dsl`], [`report`], [`suite`]: the user surface.

#![forbid(unsafe_code)]

pub mod dsl;
pub mod error;
pub mod ktheory;
pub mod numeric;
pub mod presentations;
pub mod rational;
pub mod report;
pub mod sampling;
pub mod suite;
pub mod tensor;
pub mod toeplitz;

pub use error::{Error, Result};
pub use rational::Rat;
pub use report::{Status, VerificationReport};
pub use tensor::{AlgMatrix, Block, Signature, Sym, TensorElement};
pub use toeplitz::{LaurentPoly, ToeplitzBasis, ToeplitzElement};
