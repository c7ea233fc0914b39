//! Exact linear algebra over the rationals and prime fields.

mod field;
mod graded;
mod matrix;

pub use field::{q, FieldSpec, Rational};
pub use graded::{
    find_section, rank_kernel, tensor, tensor_collection, tensor_map_collection, tensor_maps,
    truncated_polynomial, GradedMap, GradedSpace, RankKernel,
};
pub use matrix::{kernel, rank, right_inverse, solve, sparse_rank, Matrix, SparseMatrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("unrecognized field `{0}` (expected `q` or a prime)")]
    BadField(String),
    #[error("a denominator vanishes modulo {p}")]
    DenominatorVanishes { p: u64 },
    #[error("matrix shape mismatch: expected {expected:?}, found {found:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("graded map needs {expected} degree blocks, found {found}")]
    BlockCount { expected: usize, found: usize },
    #[error("mixed truncation degrees {0} and {1}")]
    MixedTruncation(usize, usize),
    #[error("a graded space needs at least degree zero")]
    EmptyGrading,
    #[error("polynomial generators must have positive degree")]
    ZeroGeneratorDegree,
}
