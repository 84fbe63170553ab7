//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix entries do not all live in the same field")]
    FieldMismatch,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("index out of range: {0}")]
    BadIndex(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("entry count {got} does not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("{0} is not prime or not in range")]
    BadPrime(u64),
    #[error("cannot parse scalar {text:?}: {reason}")]
    BadScalar { text: String, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("relation is not admissible: {0}")]
    InadmissibleRelation(String),
    #[error("path quotient did not stabilize (length cap {cap}, {paths} paths enumerated)")]
    InfiniteDimensional { cap: usize, paths: usize },
    #[error("operation requires a monomial algebra")]
    NotMonomial,
    #[error("operation requires a quadratic monomial algebra")]
    NotQuadraticMonomial,
    #[error("operation requires a radical-square-zero algebra (relations must be all length-2 paths)")]
    NotRadicalSquareZero,
    #[error("modules are defined over different algebras")]
    AlgebraMismatch,
    #[error("relation not satisfied by the module: relation #{0}")]
    RelationNotSatisfied(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("sequence is not short exact: {0}")]
    NotExact(String),
    #[error("morphism shapes do not match: {0}")]
    MorphismShape(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabError {
    #[error("source/target mismatch when composing stabilized morphisms")]
    SourceTargetMismatch,
    #[error("backend does not expose linear Hom spaces")]
    BackendNotLinear,
    #[error("target backend is not strictly stable")]
    NotStrictlyStable,
    #[error("p_max {p_max} is below the base level {base}")]
    ShiftOutOfRange { p_max: i64, base: i64 },
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
