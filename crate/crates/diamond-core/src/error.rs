use alloc::string::String;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    Domain(String),
    /// A covariance block (or other matrix) is singular or numerically
    /// indistinguishable from singular; signals a diverging information
    /// quantity or a degenerate construction.
    Singular(String),
    /// No feasible point exists on any search grid.
    Infeasible,
    /// A configuration value violates a documented limit.
    Config(String),
    /// A coefficient construction degenerates (e.g. zero link capacity);
    /// callers short-circuit to a zero rate.
    Degenerate(String),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Singular(msg) => write!(f, "singular matrix: {msg}"),
            Error::Infeasible => write!(f, "no feasible point on any search grid"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate construction: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
