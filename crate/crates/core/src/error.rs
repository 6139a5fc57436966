use thiserror::Error;

/// Errors raised by the lattice, enumeration, cone and classification routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("form is not negative definite")]
    NotNegativeDefinite,

    #[error("class {class:?} has non-positive square {square}")]
    NonPositiveSquare { class: Vec<i64>, square: i64 },

    #[error("zero vector is not allowed here")]
    ZeroVector,

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("discriminant element is not isotropic (q = {q} mod 2)")]
    NotIsotropic { q: String },

    #[error("trivial discriminant element")]
    TrivialElement,

    #[error("seed lies on the wall of the (-2)-class {class:?}")]
    WallDegenerate { class: Vec<i64> },

    #[error("sieve incomplete at degree {kmax}: {reason}")]
    IncompleteSieve { kmax: i64, reason: String },

    #[error("non-compact chamber: vertex {vertex:?} has square {square}")]
    NonCompactChamber { vertex: Vec<i64>, square: i64 },

    #[error("template error: {0}")]
    Template(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
