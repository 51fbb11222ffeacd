//! Exact rational linear algebra: dense matrices, reduced row echelon form,
//! nullspaces, characteristic polynomials, rational roots and generalized
//! eigenspaces.

pub mod matrix;
pub mod poly;
pub mod rational;

pub use matrix::{Matrix, MatrixError, Rref, Vector};
pub use poly::{char_poly, generalized_eigenspace, rational_roots, Polynomial, RationalRoots};
pub use rational::{
    format_rational, magnitude_key, parse_rational, rat, ratio, ParseRationalError, Rational,
};
