//! Crate error type.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("inexact division: nonzero remainder")]
    InexactDivision,

    #[error("unknown root-system tag `{0}`")]
    UnknownType(String),

    #[error("invalid simple-reflection index {0} (rank is {1})")]
    BadGenerator(usize, usize),

    #[error("element is not a minimal coset representative")]
    NotMinimalRep,

    #[error("weight is not invariant under the chosen parabolic (does not extend to P)")]
    NotParabolicChar,

    #[error("operation is defined on the full flag space only")]
    FullFlagOnly,

    #[error("classes live on different spaces")]
    SpaceMismatch,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
