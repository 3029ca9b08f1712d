//! Crate-wide error type.
//!
//! Every failure mode carries a distinct message prefix so the CLI can surface
//! module errors verbatim and tests can match on them.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("window-underflow: differential data missing below degree {0}")]
    WindowUnderflow(i64),

    #[error("incomplete-degree: output degree {0} cannot be assembled from available source degrees")]
    IncompleteDegree(i64),

    #[error("sub-not-contained: sub vector {0} lies outside the ambient span")]
    SubNotContained(usize),

    #[error("non-cocommutative: right comodule structure unavailable for coalgebra without the cocommutative flag")]
    NonCocommutative,

    #[error("not-reduced: {0}")]
    NotReduced(String),

    #[error("not-2-reduced: {0}")]
    Not2Reduced(String),

    #[error("not-coaugmented: {0}")]
    NotCoaugmented(String),

    #[error("not-augmented: {0}")]
    NotAugmented(String),

    #[error("not-an-algebra-map: {0}")]
    NotAnAlgebraMap(String),

    #[error("coalgebra-mismatch: {0}")]
    CoalgebraMismatch(String),

    #[error("algebra-mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("degree-zero-generator: generator {0} has degree < 1")]
    DegreeZeroGenerator(String),

    #[error("filtration-not-preserved: d maps filtration level {0} outside itself in degree {1}")]
    FiltrationNotPreserved(i64, i64),

    #[error("hypothesis-violated: {0}")]
    HypothesisViolated(String),

    #[error("parse-error: {0}")]
    Parse(String),

    #[error("invariant-violation: {0}")]
    InvariantViolation(String),

    #[error("straightening-failed: element of degree {0} is not in the span of the Lie basis")]
    StraighteningFailed(i64),

    #[error("shape-mismatch: {0}")]
    ShapeMismatch(String),

    #[error("io-error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
