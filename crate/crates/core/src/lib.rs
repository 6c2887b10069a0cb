//! Finite factored sets: partitions, factorizations, history, orthogonality,
//! time, set polynomials, product distributions and temporal inference.

pub mod agency;
pub mod cli;
pub mod error;
pub mod factored_set;
pub mod format;
pub mod inference;
pub mod partitions;
pub mod polynomial;
pub mod probability;
pub mod sample;
pub mod structure;

pub use error::{Error, Result};
pub use factored_set::{FactorSubset, FactoredSet};
pub use partitions::{ElementSet, GroundSet, Partition};
