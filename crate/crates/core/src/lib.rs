//! Information-theoretic measures of atomic electron densities.
//!
//! Position and momentum densities are built from Slater-type orbital
//! expansions, then fed to Shannon entropies, Onicescu information energy,
//! Landsberg order, SDL complexity and Kullback/Jensen–Shannon distances.

pub mod basis;
pub mod bessel;
pub mod densities;
pub mod distances;
pub mod error;
pub mod measures;
pub mod models;
pub mod quadrature;
pub mod report;
pub mod transform;

pub use error::{Error, Result};
