//! Tropical determinants by exhaustive enumeration of bijections.

use std::collections::BTreeSet;

use super::matrix::{SubmatrixSelector, SymMatrix, TropMatrix};
use super::monomial::{Monomial, SymMonomial};
use super::perm::{self, Permutation, MAX_ENUMERATED};
use super::TropError;
use crate::value::TropValue;

/// Value of the tropical determinant and every permutation attaining it.
///
/// A realizer `σ` maps row `sel.rows[p]` to column `sel.cols[σ(p)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropDet {
    pub value: TropValue,
    pub realizers: Vec<Permutation>,
}

fn check(a: &TropMatrix, sel: &SubmatrixSelector) -> Result<(), TropError> {
    sel.check(a)?;
    if sel.size() > MAX_ENUMERATED {
        return Err(TropError::TooLarge(sel.size()));
    }
    Ok(())
}

#[inline]
fn weight(a: &TropMatrix, rows: &[usize], cols: &[usize], p: &[u8]) -> i64 {
    let mut w = 0;
    for (k, &c) in p.iter().enumerate() {
        w += a.scaled(rows[k], cols[c as usize]);
    }
    w
}

/// Minimum scaled weight and the table indices attaining it.
fn scan(a: &TropMatrix, sel: &SubmatrixSelector) -> (i64, Vec<usize>) {
    let table = perm::table(sel.size());
    let mut best = i64::MAX;
    let mut arg = Vec::new();
    for (idx, p) in table.iter().enumerate() {
        let w = weight(a, &sel.rows, &sel.cols, p);
        if w < best {
            best = w;
            arg.clear();
            arg.push(idx);
        } else if w == best {
            arg.push(idx);
        }
    }
    (best, arg)
}

pub fn trop_det(a: &TropMatrix, sel: &SubmatrixSelector) -> Result<TropDet, TropError> {
    check(a, sel)?;
    let (best, arg) = scan(a, sel);
    let table = perm::table(sel.size());
    let realizers = arg
        .into_iter()
        .map(|idx| {
            Permutation::from_images(table.get(idx).iter().map(|&v| v as usize).collect())
                .expect("table rows are bijections")
        })
        .collect();
    Ok(TropDet {
        value: a.unscale(best),
        realizers,
    })
}

/// Tropical determinant of a whole square matrix.
pub fn trop_det_full(a: &TropMatrix) -> Result<TropDet, TropError> {
    trop_det(a, &SubmatrixSelector::full(a))
}

pub fn minimizing_monomials(
    a: &TropMatrix,
    sel: &SubmatrixSelector,
) -> Result<Vec<Monomial>, TropError> {
    let det = trop_det(a, sel)?;
    Ok(det
        .realizers
        .iter()
        .map(|s| Monomial {
            pairs: (0..sel.size())
                .map(|p| (sel.rows[p], sel.cols[s.apply(p)]))
                .collect(),
            weight: det.value,
        })
        .collect())
}

/// Distinct minimizing monomials after identifying `X(i,j)` with `X(j,i)`, sorted canonically.
pub fn sym_minimizing_monomials(
    a: &SymMatrix,
    sel: &SubmatrixSelector,
) -> Result<Vec<SymMonomial>, TropError> {
    let set: BTreeSet<SymMonomial> = minimizing_monomials(a.matrix(), sel)?
        .iter()
        .map(Monomial::symmetrize)
        .collect();
    Ok(set.into_iter().collect())
}

pub fn is_trop_singular(a: &TropMatrix, sel: &SubmatrixSelector) -> Result<bool, TropError> {
    check(a, sel)?;
    Ok(singular_unchecked(a, sel))
}

pub fn is_sym_trop_singular(a: &SymMatrix, sel: &SubmatrixSelector) -> Result<bool, TropError> {
    check(a.matrix(), sel)?;
    Ok(sym_singular_unchecked(a.matrix(), sel))
}

pub(crate) fn singular_unchecked(a: &TropMatrix, sel: &SubmatrixSelector) -> bool {
    let table = perm::table(sel.size());
    let mut best = i64::MAX;
    let mut count = 0;
    for p in table.iter() {
        let w = weight(a, &sel.rows, &sel.cols, p);
        if w < best {
            best = w;
            count = 1;
        } else if w == best {
            count += 1;
        }
    }
    count >= 2
}

/// Packs the sorted unordered pairs of one bijection into an integer key.
#[inline]
fn sym_key(rows: &[usize], cols: &[usize], p: &[u8]) -> u128 {
    let mut buf = [0u16; MAX_ENUMERATED];
    let k = p.len();
    for (i, &c) in p.iter().enumerate() {
        let (r, c) = (rows[i] as u16, cols[c as usize] as u16);
        buf[i] = if r <= c { (r << 8) | c } else { (c << 8) | r };
    }
    buf[..k].sort_unstable();
    buf[..k]
        .iter()
        .fold(0u128, |acc, &v| (acc << 16) | v as u128)
}

pub(crate) fn sym_singular_unchecked(a: &TropMatrix, sel: &SubmatrixSelector) -> bool {
    let (_, arg) = scan(a, sel);
    if arg.len() < 2 {
        return false;
    }
    let table = perm::table(sel.size());
    let first = sym_key(&sel.rows, &sel.cols, table.get(arg[0]));
    arg[1..]
        .iter()
        .any(|&idx| sym_key(&sel.rows, &sel.cols, table.get(idx)) != first)
}
