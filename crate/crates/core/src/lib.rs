//! Exact-arithmetic decision procedures for the Torelli property of smooth
//! projective hypersurfaces.
//!
//! A smooth hypersurface is determined by (the isomorphism class of) its
//! sheaf of logarithmic vector fields exactly when its defining polynomial is
//! *not* of Sebastiani-Thom type, i.e. cannot be written, after an invertible
//! linear change of coordinates, as a sum of two nonzero polynomials in
//! disjoint sets of variables. This crate detects Sebastiani-Thom type by one
//! exact kernel computation, constructively extracts a splitting when one
//! exists, and exposes the supporting machinery: Jacobi ideals, an exact
//! smoothness test, graded Hilbert functions of annihilating derivations, and
//! the vanishing predicate for the j-invariant of smooth plane cubics.
//!
//! All computation is exact, over the rationals or a prime field; nothing is
//! floating point. The crate is `no_std` (with `alloc`).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cubic;
pub mod field;
pub mod jacobi;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod sebastiani;
pub mod torelli;
pub mod univar;

pub use field::{Field, PrimeField, Rationals};
pub use jacobi::{is_smooth, jacobi_piece, log_derivation_dims, partials_independent};
pub use linalg::{ScalarMatrix, Subspace};
pub use parse::{parse_poly, parse_with_default_vars};
pub use poly::{CoordinateChange, HomPoly, Monomial};
pub use sebastiani::{extract_decomposition, is_st, st_space, verify_decomposition};
pub use torelli::{jacobi_jump_indicator, torelli_verdict};
