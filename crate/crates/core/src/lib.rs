//! Non-semigroup gradings of associative algebras, computed exactly.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactla`]: rational matrices, rref, nullspaces, characteristic
//!   polynomials and generalized eigenspaces.
//! - [`algebra`]: structure-constant algebras, identity checks, subspace
//!   products and the four-map family `A(f_L, f_R, g_L, g_R)`.
//! - [`derivation`]: `(delta, gamma)`-derivations, the closed-form
//!   parametrization for the family, root space decompositions and the
//!   gradings they induce.
//! - [`magma`]: partial magmas and whether they embed into a semigroup, with
//!   certificates that can be replayed independently.

pub mod algebra;
pub mod derivation;
pub mod exactla;
pub mod magma;

pub use algebra::{Algebra, FamilySpec, Identity, JacobiProduct, Subspace};
pub use derivation::{DerivationProblem, Grading, LinearMap};
pub use exactla::{Matrix, Polynomial, Rational};
pub use magma::{EmbeddabilityVerdict, Limits, PartialMagma};
