//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong when building spectra, enumerating index
/// sets, integrating, or estimating coefficients.
#[derive(Debug, Error)]
pub enum Error {
    /// The weighted eigenvalue sequence is not nonincreasing.
    #[error("weighted eigenvalues not nonincreasing: lambda_b[{index}] = {value} > lambda_b[{}] = {previous}", index - 1)]
    NonMonotone {
        index: usize,
        value: f64,
        previous: f64,
    },

    /// A weight b_i fell outside (0, 1].
    #[error("weight b[{index}] = {value} outside (0, 1]")]
    BadWeight { index: usize, value: f64 },

    /// A tabulated quantity was requested beyond the materialized range.
    #[error("index {index} beyond queryable range {max}")]
    OutOfRange { index: usize, max: usize },

    /// An input vector was shorter than a multi-index support requires.
    #[error("coordinate vector of length {got} shorter than max support {needed}")]
    DimensionMismatch { needed: usize, got: usize },

    /// Gauss-Hermite node count outside the supported range.
    #[error("node count {0} outside supported range 1..=200")]
    BadNodeCount(usize),

    /// A quadrature rule cannot integrate the requested degree exactly.
    #[error("quadrature too coarse: {0}")]
    QuadratureTooCoarse(String),

    /// An index-set enumeration would exceed the configured cap.
    #[error("index set too large: upper size bound {bound:.3e} exceeds cap {cap}")]
    SetTooLarge { bound: f64, cap: usize },

    /// The effective dimension is infinite (or not determinable), so the
    /// requested truncation set does not exist.
    #[error("effective dimension not finite: {0}")]
    InfiniteEffectiveDimension(String),

    /// A parameter violated the documented admissible range.
    #[error("bad parameter: {0}")]
    BadParams(String),

    /// Exponents for the Kolmogorov width formula must satisfy q < p.
    #[error("bad exponents: need 1 <= q < p, got p = {p}, q = {q}")]
    BadExponents { p: f64, q: f64 },

    /// A hard work limit was exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// An operator evaluation or reduction produced NaN or infinity.
    #[error("non-finite value encountered: {0}")]
    NonFiniteValue(String),

    /// Malformed serialized data.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code for the CLI: 2 usage/validation, 3 resource
    /// limit, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonMonotone { .. }
            | Error::BadWeight { .. }
            | Error::OutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::BadNodeCount(_)
            | Error::InfiniteEffectiveDimension(_)
            | Error::BadParams(_)
            | Error::BadExponents { .. }
            | Error::Parse(_) => 2,
            Error::SetTooLarge { .. } | Error::ResourceLimit(_) => 3,
            Error::QuadratureTooCoarse(_) | Error::NonFiniteValue(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
