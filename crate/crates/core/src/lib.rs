//! Reversal of quantum operations.
//!
//! Quantum operations are written as Kraus sums on a finite-dimensional
//! Hilbert space. The crate decides when an operation can be undone on a code
//! subspace, builds the reversal when it can, and tracks the information
//! measures (entropy exchange, entanglement fidelity) that govern both error
//! correction and the thermodynamic cost of a measuring demon.

pub mod demon;
pub mod error;
pub mod info;
pub mod linalg;
pub mod operations;
pub mod random;
pub mod reversibility;
pub mod standard;

pub use error::{Error, Result};
