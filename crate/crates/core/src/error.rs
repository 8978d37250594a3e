use thiserror::Error;

/// Errors raised by the exact, enumerative and asymptotic routes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("unsupported order {0}")]
    UnsupportedOrder(String),
    #[error("precision target not reached: {0}")]
    Precision(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate sector: a factor vanishes exactly")]
    Degenerate,
    #[error("near-singular factor |f| = {0:e}; cumulant unreliable")]
    NearSingular(f64),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("size {m}x{n} exceeds the enumeration bound 2mn <= {bound}")]
    Size { m: usize, n: usize, bound: usize },
    #[error("malformed cover: {0}")]
    MalformedCover(String),
    #[error("no crossover solution: {0}")]
    NoSolution(String),
    #[error("quadrature budget exceeded, achieved error {achieved:e}")]
    Budget { achieved: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
