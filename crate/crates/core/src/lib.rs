//! Exact rational-point propagation on elliptically fibered varieties over Q.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod fibration;
pub mod constructions;
pub mod genus1;
pub mod modp;
pub mod propagate;

pub use error::{Error, Result};
