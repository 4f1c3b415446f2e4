pub mod arith;
pub mod characters;
pub mod cli;
pub mod error;
pub mod ff;
pub mod fq;
pub mod knormal;
pub mod poly;
pub mod search;
pub mod sieve;
pub mod tables;
pub mod upoly;

pub use error::{Error, Result};
pub use ff::{build_field, FieldContext, FieldElement, PrimePower};
pub use poly::{Factorization, Poly};
