//! Khovanov-type homology under the universal differential over ℤ[s,t], with
//! machine-checked Reidemeister retractions and homotopies.

pub mod complex;
pub mod conditions;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod frobenius;
pub mod homology;
pub mod invariants;
pub mod moves;
pub mod polyring;
pub mod resolution;
pub mod ring;

pub use error::{Error, Result};
