//! Symbolic-numeric engine for residue densities of perturbed Dirac
//! operators in dimension four.
//!
//! The symbolic path is exact (Gaussian rationals over a fixed registry of
//! indeterminates). The [`oracle`] module provides independent floating
//! point checks: gamma matrices, Monte-Carlo sphere moments and quadrature.

pub mod boundary;
pub mod clifford;
pub mod cosphere;
pub mod error;
pub mod geometry;
pub mod halfplane;
pub mod oracle;
pub mod parse;
pub mod printed;
pub mod scalar;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
