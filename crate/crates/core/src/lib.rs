//! Synthetic computable topology over integer-stream names: Sierpiński-valued
//! semidecisions, hyperspaces, presubbases and prebases, a finite-topology
//! oracle, and exact-real representation repair.

pub mod error;
pub mod hyper;
pub mod kernel;
pub mod bases;
pub mod oracle;
pub mod reals;
pub mod sierpinski;
pub mod spaces;

pub use error::{Error, Result};
pub use kernel::{Fuel, Name};
pub use sierpinski::SValue;
