//! Tropical and symmetric tropical linear algebra over exact rationals, the
//! method of joints for symmetric 5×5 matrices, and certified symmetric
//! rank-3 lifts over truncated Puiseux series.

pub mod joints;
pub mod lifts;
pub mod normal_form;
pub mod par;
pub mod puiseux;
pub mod trop;
pub mod value;
pub mod witnesses;

pub use trop::*;
pub use value::{Rational, TropValue};
