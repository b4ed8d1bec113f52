use thiserror::Error;

/// Errors raised by the geometric pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("invalid curvature specification: {0}")]
    InvalidSpec(String),
    #[error("period {period} is not minimal: the function repeats after {divisor}")]
    NotMinimalPeriod { period: f64, divisor: f64 },
    #[error("degenerate curvature function: {0}")]
    DegenerateFunction(String),
    #[error("degenerate signature: {0}")]
    DegenerateSignature(String),
    #[error("curve is not regular at sample {index}")]
    NonRegularCurve { index: usize },
    #[error("invalid step {0}")]
    InvalidStep(f64),
    #[error("curve is not closed: relative endpoint gap {0:.3e}")]
    NotClosed(f64),
    #[error("signature is simple: no self-intersections, quiver is undefined")]
    SimpleSignature,
    #[error("word is not a path in the quiver: {0}")]
    NotAPath(String),
    #[error("word is not cyclic: {0}")]
    NotCyclic(String),
    #[error("word parse error at offset {offset}: {message}")]
    WordParse { offset: usize, message: String },
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
    #[error("too many edges for single-letter labels ({0})")]
    TooManyEdges(usize),
    #[error("count overflow while counting words")]
    CountOverflow,
    #[error("unknown gallery entry `{0}`")]
    UnknownGallery(String),
    #[error("csv error: {0}")]
    Csv(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
