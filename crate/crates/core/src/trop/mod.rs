//! Min-plus linear algebra: values, matrices, determinants, monomials, ranks
//! and tropical polynomials.

mod det;
mod matrix;
mod monomial;
mod perm;
mod poly;
mod rank;
mod text;

use thiserror::Error;

pub use det::{
    is_sym_trop_singular, is_trop_singular, minimizing_monomials, sym_minimizing_monomials,
    trop_det, trop_det_full, TropDet,
};
pub use matrix::{subsets, SubmatrixSelector, SymMatrix, TropMatrix};
pub use monomial::{Monomial, SymMonomial};
pub use perm::{Permutation, MAX_ENUMERATED};
pub use poly::{determinantal_polynomial, symmetric_determinantal_polynomial, TropPolynomial};
pub use rank::{
    find_nonsingular, sym_rank_at_most_3, symmetric_tropical_rank, symmetric_tropical_rank_with,
    tropical_rank, tropical_rank_with, Singularity, MAX_RANK_DIM,
};
pub use text::{format_matrix, matrix_to_json, parse_matrix, MatrixInput, MatrixParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TropError {
    #[error("not a bijection: {0:?}")]
    NotABijection(Vec<usize>),
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("rows have different lengths")]
    Ragged,
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("entries ({}, {}) and ({}, {}) differ", .0 + 1, .1 + 1, .1 + 1, .0 + 1)]
    NotSymmetric(usize, usize),
    #[error("common denominator {0} is too large")]
    DenominatorTooLarge(i64),
    #[error("selection is {0}x{1}, expected square")]
    NonSquareSelection(usize, usize),
    #[error("selection indices must be strictly increasing")]
    UnsortedSelection,
    #[error("selection index out of range")]
    IndexOutOfRange,
    #[error("size {0} exceeds the enumeration bound")]
    TooLarge(usize),
    #[error("point has dimension {found}, polynomial expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial has no monomials")]
    EmptyPolynomial,
    #[error("exponent vectors have different lengths")]
    ExponentLength,
}
