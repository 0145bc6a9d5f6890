//! Density-matrix simulation of entanglement sudden death under generalized
//! amplitude damping, and its partial reversal by a single local filter.

pub mod channels;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod measures;
pub mod states;

pub use error::{Error, Result};
