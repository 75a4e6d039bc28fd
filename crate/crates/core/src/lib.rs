//! Quantum Fisher information, variance roofs and uncertainty relations for
//! finite-dimensional systems.

pub mod bounds;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod metrology;
pub mod quantum;
pub mod roofs;
pub mod states;

pub use error::{Error, Result};
