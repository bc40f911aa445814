//! Exact graded commutative algebra in positive characteristic.

pub mod arith;
pub mod cli;
pub mod error;
pub mod frobenius;
pub mod graded;
pub mod local_cohomology;
pub mod poly;
pub mod qdivisor;

pub use error::{Error, Result};
