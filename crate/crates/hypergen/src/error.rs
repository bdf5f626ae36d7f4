//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Why a degree/dimension sequence pair admits no hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealisabilityViolation {
    /// Total degree and total dimension differ.
    TotalMismatch { degree_total: u128, dimension_total: u128 },
    /// An edge would need more distinct vertices than exist.
    DimensionTooLarge { max_dimension: usize, n_vertices: usize },
    /// Gale-Ryser prefix dominance first fails at this prefix length
    /// (1-based).
    PrefixViolation { index: usize },
}

impl std::fmt::Display for RealisabilityViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RealisabilityViolation::TotalMismatch {
                degree_total,
                dimension_total,
            } => write!(
                f,
                "total degree {degree_total} != total dimension {dimension_total}"
            ),
            RealisabilityViolation::DimensionTooLarge {
                max_dimension,
                n_vertices,
            } => write!(
                f,
                "largest edge dimension {max_dimension} exceeds vertex count {n_vertices}"
            ),
            RealisabilityViolation::PrefixViolation { index } => {
                write!(f, "dominance violated at prefix index {index}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("sequences are not realisable: {0}")]
    NotRealisable(RealisabilityViolation),

    /// A condition the algorithms guarantee for realisable inputs failed;
    /// always a bug, never a caller error.
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("enumeration work cap exceeded: n*m = {actual} > {cap}")]
    CapExceeded { actual: usize, cap: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("input contains no edges")]
    EmptyInput,

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::InternalInvariant(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
