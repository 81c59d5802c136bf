//! Exact analysis of central hyperplane arrangements over the rationals.
//!
//! The crate computes intersection lattices and Poincaré polynomials,
//! solves for graded pieces of the module of logarithmic derivations,
//! certifies freeness with Saito's criterion, decides supersolvability via
//! modular coatoms, computes 3-dependency statistics, and enumerates the
//! abstract rank-2 configurations relevant to free arrangements whose
//! exponents are 1's, 2's and a single 3.

pub mod arrangement;
pub mod catalog;
pub mod dependencies;
pub mod derivations;
pub mod error;
pub mod exact;
pub mod induction;
pub mod lattice;
pub mod report;
pub mod scan;

pub use arrangement::{Arrangement, LinearForm};
pub use error::{Error, Result};
pub use exact::{MPoly, QMatrix, Rational};
