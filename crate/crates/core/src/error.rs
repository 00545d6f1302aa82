use thiserror::Error;

/// Errors raised by the solver core.
///
/// `Cap` and `Budget` mark inputs that are too large for the exhaustive
/// routines; `Invariant` marks an internal contract breach.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("variable {0} has an infinite bound where finite bounds are required")]
    InfiniteBound(usize),
    #[error("cap exceeded: {what} is {size}, limit {limit}")]
    Cap {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("unbounded: {0}")]
    Unbounded(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn cap(what: &'static str, size: impl TryInto<u128>, limit: impl TryInto<u128>) -> Error {
    Error::Cap {
        what,
        size: size.try_into().unwrap_or(u128::MAX),
        limit: limit.try_into().unwrap_or(u128::MAX),
    }
}
