//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),

    #[error("cannot decide squareness over {0}; only rational square classes and generator powers are recognised for cubic/quartic extensions")]
    SqrtUndecided(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("extension symbol `{0}` used over the plain rationals")]
    SymbolOverRationals(String),

    #[error("variable mismatch: expected ambient {expected}, got {got}")]
    VarMismatch { expected: String, got: String },

    #[error("{0} is not a unit (zero constant term)")]
    NotAUnit(String),

    #[error("constant term {0} is not a square in the configured field")]
    NotASquare(String),

    #[error("expected a nonzero polynomial")]
    ZeroInput,

    #[error("expected a polynomial in the maximal ideal (positive order); got a unit")]
    UnitInput,

    #[error("hypersurface mismatch between matrix factorizations")]
    HypersurfaceMismatch,

    #[error("truncation-order mismatch: {0}")]
    OrderMismatch(String),

    #[error("matrix factorization of unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("free summand has no reduced factorization")]
    FreeHasNoReducedFactorization,

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("factor count {0} outside the supported range 1..=8")]
    FactorCountOutOfRange(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("semisimple quotient at vertex {0} is not split; radical computation refused")]
    NonSplitVertex(String),

    #[error("Weierstrass preparation failed to converge at order {0}")]
    WeierstrassDiverged(usize),

    #[error("job specification error: {0}")]
    Job(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
