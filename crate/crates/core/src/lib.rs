//! Continued fractions, dichotomy series and improvability tests for
//! Dirichlet non-improvable numbers.

pub mod approx;
pub mod cf;
pub mod classify;
pub mod dimfun;
pub mod error;
pub mod experiments;
pub mod precision;
pub mod probe;
pub mod report;
pub mod series;

pub use error::{Error, Result};
