pub mod arith;
pub mod complexes;
pub mod cubes;
pub mod error;
pub mod fpmodules;
pub mod cli;
pub mod koszul;
pub mod random;
pub mod witness;

pub use error::{Error, Result};
