//! Experiments and tools around `ophash`: synthetic data, corpus files,
//! the MSE and retrieval experiments and the verification report.

pub mod data;
pub mod error;
pub mod mse;
pub mod report;
pub mod retrieval;
pub mod verify;

pub use error::{BenchError, Result};
