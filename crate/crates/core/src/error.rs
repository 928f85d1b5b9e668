use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FoliateError {
    #[error("invalid split dimensions n={n}, q={q}: need n >= 2 and 1 <= q <= n")]
    InvalidDims { n: usize, q: usize },

    #[error("coefficient array `{name}` has length {got}, expected {expected}")]
    ShapeMismatch { name: &'static str, expected: usize, got: usize },

    #[error("coefficient array contains a non-finite entry")]
    NonFinite,

    #[error("invalid model space: {0}")]
    InvalidSpace(String),

    #[error("focal variety {focal} is outside the catalog for {space}")]
    OutOfCatalog { space: String, focal: String },

    #[error("{space} around {focal} is not computable: its tubes lack constant principal curvatures")]
    NotComputable { space: String, focal: String },

    #[error("q={q} is not an invariant dimension on {space} (must be a multiple of {step})")]
    NotInvariant { space: String, q: usize, step: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature undecided on [{a}, {b}]: {reason}")]
    Undecided { a: f64, b: f64, reason: String },

    #[error("bound case {case} is inconsistent with n={n}, q={q}")]
    InvalidBoundCase { case: String, n: usize, q: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = FoliateError> = std::result::Result<T, E>;
