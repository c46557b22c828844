//! Error vocabulary shared by the kernel, the series evaluators and the
//! identity harness.

use thiserror::Error;

/// Everything that can go wrong while evaluating q-products, series or
/// identity expressions.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A factor of a negative-order q-shifted factorial (or another exact
    /// denominator) is exactly zero, so the requested value is infinite.
    #[error("pole: {0}")]
    Pole(String),

    /// Ball arithmetic could not certify a denominator away from zero at the
    /// working precision; raising the precision may help.
    #[error("precision: {0}")]
    Precision(String),

    /// The input lies outside the domain of the operation (|q| >= 1, exact
    /// evaluation of a nonterminating sum, square root of a non-square
    /// rational, ...).
    #[error("domain: {0}")]
    Domain(String),

    /// The ratio test certifies (or cannot exclude) divergence.
    #[error("divergence: {0}")]
    Divergence(String),

    /// The term budget was exhausted before the tail bound reached the
    /// requested tolerance.
    #[error("budget: {0}")]
    Budget(String),

    /// Rejection sampling could not find enough admissible parameter sets.
    #[error("exhaustion: {0}")]
    Exhaustion(String),

    /// Malformed configuration (unknown identity id, bad range, ...).
    #[error("config: {0}")]
    Config(String),
}

impl Error {
    /// Prefix the error message with evaluation context, e.g. the index of
    /// the expression term that failed.
    pub fn with_context(self, ctx: &str) -> Error {
        let wrap = |msg: String| format!("{ctx}: {msg}");
        match self {
            Error::Pole(m) => Error::Pole(wrap(m)),
            Error::Precision(m) => Error::Precision(wrap(m)),
            Error::Domain(m) => Error::Domain(wrap(m)),
            Error::Divergence(m) => Error::Divergence(wrap(m)),
            Error::Budget(m) => Error::Budget(wrap(m)),
            Error::Exhaustion(m) => Error::Exhaustion(wrap(m)),
            Error::Config(m) => Error::Config(wrap(m)),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
