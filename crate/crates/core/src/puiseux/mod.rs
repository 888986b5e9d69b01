//! Truncated Puiseux series over an exact coefficient field.
//!
//! A series is known exactly below a rational cutoff and unknown above it.
//! Every operation propagates the cutoff, so a result that is zero to its
//! cutoff is a statement about a finite number of coefficients, nothing more.

mod field;
mod matrix;
mod series;

use thiserror::Error;

pub use field::{random_generic_coefficient, Coeff, Fp, P, Q};
pub use matrix::SeriesMatrix;
pub use series::PuiseuxSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PuiseuxError {
    #[error("division by a series that is zero to its cutoff")]
    DivisionByZeroToCutoff,
    #[error("leading coefficient has no square root in the coefficient field")]
    NoSquareRoot,
    #[error("cutoff too small to decide a vanishing entry")]
    CutoffExhausted,
    #[error("repeated exponent in term list")]
    RepeatedExponent,
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("linear system is singular to the cutoff")]
    SingularSystem,
}
