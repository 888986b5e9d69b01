//! Tropical and symmetric tropical rank.
//!
//! Rank is the largest `r` with a (symmetrically) tropically nonsingular `r×r`
//! submatrix. Nonsingularity is inherited downward: if an `r×r` submatrix has a
//! unique minimizing monomial, deleting a row and its partner column from the
//! realizing bijection leaves a submatrix with a unique minimizing monomial.
//! So the search climbs `r = 1, 2, ..` and stops at the first size with no
//! nonsingular submatrix.

use super::det::{singular_unchecked, sym_singular_unchecked};
use super::matrix::{subsets, SubmatrixSelector, SymMatrix, TropMatrix};
use super::perm::MAX_ENUMERATED;
use super::TropError;
use crate::par::{self, Exec};

/// Largest matrix side accepted by the rank functions.
pub const MAX_RANK_DIM: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Singularity {
    /// Plain tropical singularity.
    General,
    /// Singularity under `X(i,j) = X(j,i)`.
    Symmetric,
}

fn singular(a: &TropMatrix, sel: &SubmatrixSelector, kind: Singularity) -> bool {
    match kind {
        Singularity::General => singular_unchecked(a, sel),
        Singularity::Symmetric => sym_singular_unchecked(a, sel),
    }
}

/// First nonsingular `r×r` submatrix in lexicographic (rows, cols) order.
pub fn find_nonsingular(
    a: &TropMatrix,
    r: usize,
    kind: Singularity,
    exec: Exec,
) -> Result<Option<SubmatrixSelector>, TropError> {
    if r > MAX_ENUMERATED {
        return Err(TropError::TooLarge(r));
    }
    let row_sets = subsets(a.rows(), r);
    let col_sets = subsets(a.cols(), r);
    Ok(par::find_map_first(exec, &row_sets, |rows| {
        col_sets.iter().find_map(|cols| {
            let sel = SubmatrixSelector {
                rows: rows.clone(),
                cols: cols.clone(),
            };
            (!singular(a, &sel, kind)).then_some(sel)
        })
    }))
}

fn rank_impl(a: &TropMatrix, kind: Singularity, exec: Exec) -> Result<usize, TropError> {
    let limit = a.rows().min(a.cols());
    if a.rows().max(a.cols()) > MAX_RANK_DIM {
        return Err(TropError::TooLarge(a.rows().max(a.cols())));
    }
    let mut r = 0;
    while r < limit {
        if find_nonsingular(a, r + 1, kind, exec)?.is_none() {
            break;
        }
        r += 1;
    }
    Ok(r)
}

pub fn tropical_rank(a: &TropMatrix) -> Result<usize, TropError> {
    rank_impl(a, Singularity::General, Exec::default())
}

pub fn tropical_rank_with(a: &TropMatrix, exec: Exec) -> Result<usize, TropError> {
    rank_impl(a, Singularity::General, exec)
}

pub fn symmetric_tropical_rank(a: &SymMatrix) -> Result<usize, TropError> {
    rank_impl(a.matrix(), Singularity::Symmetric, Exec::default())
}

pub fn symmetric_tropical_rank_with(a: &SymMatrix, exec: Exec) -> Result<usize, TropError> {
    rank_impl(a.matrix(), Singularity::Symmetric, exec)
}

/// True when every 4×4 submatrix is symmetrically singular, i.e. rank ≤ 3.
pub fn sym_rank_at_most_3(a: &SymMatrix) -> bool {
    if a.n() < 4 {
        return true;
    }
    find_nonsingular(a.matrix(), 4, Singularity::Symmetric, Exec::Sequential)
        .expect("4 is enumerable")
        .is_none()
}
