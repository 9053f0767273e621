pub mod error;
pub mod constructions;
pub mod geom;
pub mod harness;
pub mod ledger;
pub mod solver;

pub use error::{Error, Result};
