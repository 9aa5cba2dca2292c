//! Qudit gate synthesis, simulation, and benchmarking for small d-level systems.

pub mod error;
pub mod gates;
pub mod linalg;
pub mod state;

pub use error::{Error, Result};
