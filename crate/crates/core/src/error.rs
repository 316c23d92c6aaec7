use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix")]
    Singular,
    #[error("Jacobi identity fails at ({i},{j},{k},{l}) with residual {residual}")]
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        residual: String,
    },
    #[error("structure constants not antisymmetric at ({i},{j},{k})")]
    Antisymmetry { i: usize, j: usize, k: usize },
    #[error("metric is not symmetric")]
    NotSymmetric,
    #[error("metric is not positive definite (leading minor {0} is not positive)")]
    NotPositiveDefinite(usize),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("operation requires the exact backend: {0}")]
    RequiresExact(&'static str),
    #[error("realization is not skew-hermitian; the one-parameter orbit is a closed line (unbounded case)")]
    NotSkewHermitian,
    #[error("{0}")]
    Decomposition(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
