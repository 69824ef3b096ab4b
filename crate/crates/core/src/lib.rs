//! Hereditary species, the incidence bialgebra they induce, and exhaustive
//! finite checkers for the surrounding simplicial and operadic structure.

pub mod bialgebra;
pub mod cli;
pub mod comodule;
pub mod error;
pub mod groupoid;
pub mod io;
pub mod maps;
pub mod operadic;
pub mod partitions;
pub mod rational;
pub mod report;
pub mod simplicial;
pub mod species;

pub use error::{Error, Result};
