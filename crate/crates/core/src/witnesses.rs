//! Bundled witness matrices.

use crate::trop::{parse_matrix, SymMatrix, TropMatrix};

pub const FANO7: &str = include_str!("../data/fano7.txt");
pub const FANO7_SYM: &str = include_str!("../data/fano7_sym.txt");
pub const WITNESS13: &str = include_str!("../data/witness13.txt");

/// Fano cocircuit matrix: tropical rank 3.
pub fn fano7() -> TropMatrix {
    parse_matrix(FANO7)
        .expect("bundled data parses")
        .matrix()
        .clone()
}

/// Its row permutation by `(2 7)(3 6)(4 5)`: symmetric tropical rank 4.
pub fn fano7_sym() -> SymMatrix {
    parse_matrix(FANO7_SYM)
        .expect("bundled data parses")
        .to_symmetric()
        .expect("symmetric")
}

/// 13×13 symmetric matrix of symmetric tropical rank 3.
pub fn witness13() -> SymMatrix {
    parse_matrix(WITNESS13)
        .expect("bundled data parses")
        .to_symmetric()
        .expect("symmetric")
}
