use thiserror::Error;

/// Errors raised by constructors and by operations whose preconditions fail.
///
/// Checkers never return an error for a failed law; they produce a
/// [`Report`](crate::report::Report) instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("maps do not share a target: `{0}` vs `{1}`")]
    MismatchedTargets(String, String),
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("invalid groupoid map: {0}")]
    InvalidMap(String),
    #[error("witness is not natural at morphism `{0}`")]
    NonNaturalWitness(String),
    #[error("carrier mismatch: expected {expected}, found {found}")]
    CarrierMismatch { expected: usize, found: usize },
    #[error("invalid surjection: {0}")]
    InvalidSurjection(String),
    #[error("invalid injection: {0}")]
    InvalidInjection(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("species `{0}` is not simple")]
    NotSimple(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("transformation is not natural: {0}")]
    NotNatural(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
