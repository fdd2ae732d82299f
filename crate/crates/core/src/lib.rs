pub mod bounds;
pub mod cli;
pub mod corpus;
pub mod dedekind;
pub mod elimination;
pub mod error;
pub mod modp;
pub mod poly;
pub mod prime_sums;
pub mod real;

pub use error::{Error, Result};
