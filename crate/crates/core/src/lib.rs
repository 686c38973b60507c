pub mod error;
pub mod lattice;
pub mod polytope;
pub mod fan;
pub mod cycle;
pub mod kp;
pub mod io;
mod dd;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
