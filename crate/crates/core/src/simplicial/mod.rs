//! Truncated simplicial groupoids of surjection chains and their decorated
//! versions, with exhaustive checkers.

pub mod checks;
pub mod compare;
pub mod ops;
pub mod simplex;
pub mod space;
