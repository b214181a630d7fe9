//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors raised by grid construction, kernel evaluation, and projections.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed or inconsistent arguments (empty sample arrays, mismatched
    /// point dimensions, unsupported domain/measure pairings, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A synthesis grid is too coarse for the requested frequency window.
    #[error("grid of {given} nodes per circle aliases frequencies up to {max_index}; need at least {required} nodes")]
    Aliasing {
        /// Smallest admissible node count, `2·max|index| + 1`.
        required: usize,
        /// Node count that was supplied.
        given: usize,
        /// Largest absolute frequency carried by the coefficients.
        max_index: i64,
    },

    /// Evaluation at a point where the quantity is undefined: on a deleted
    /// set, at a kernel pole, outside an integration interval.
    #[error("domain error: {0}")]
    Domain(String),

    /// A constructed object failed its own validation (e.g. a conformal map
    /// whose square-root branch cannot be continued over the boundary).
    #[error("configuration error: {0}")]
    Configuration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
