pub mod arith;
pub mod axer;
pub mod bernoulli;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod identities;
pub mod mobius;
pub mod phi;
pub mod quad;
pub mod report;
pub mod transforms;

pub use error::{Error, Result};
