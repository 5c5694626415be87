//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigensolver failed to converge within its iteration budget ({size}x{size} matrix)")]
    ConvergenceFailure { size: usize },

    #[error(
        "defective network matrix: eigenvalue {eigenvalue} has geometric multiplicity \
         {geometric} < algebraic multiplicity {algebraic}; analysis requires diagonalizable G"
    )]
    DefectiveNetworkMatrix {
        eigenvalue: num_complex::Complex64,
        geometric: usize,
        algebraic: usize,
    },

    #[error("{what} is not a network-invariant mode (invariance certificate failed)")]
    NotInvariantMode { what: num_complex::Complex64 },

    #[error("empty subset: partition checks need at least one vertex")]
    EmptySubset,

    #[error("subset enumeration budget exceeded: {subsets} subsets > 2^20")]
    BudgetExceeded { subsets: u64 },

    #[error("problem too large for the brute-force oracle: N*n = {dim} > {limit}")]
    ScaleLimit { dim: usize, limit: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error(
        "protocol design exhausted after {tries} tries; best eigenvalue separation {best_separation:e}"
    )]
    DesignExhausted { tries: usize, best_separation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
