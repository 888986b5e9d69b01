use std::fmt;

use serde::{Deserialize, Serialize};

use super::TropError;
use crate::value::{common_denominator, Rational, TropValue, MAX_COMPONENT};

/// Rectangular matrix of tropical values, row-major.
///
/// Alongside the rational entries the matrix keeps an integer copy scaled to a
/// common denominator, so tie detection in the enumeration loops is plain
/// integer comparison.
#[derive(Clone, PartialEq, Eq)]
pub struct TropMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TropValue>,
    grid: Vec<i64>,
    denom: i64,
}

impl TropMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<TropValue>) -> Result<Self, TropError> {
        if entries.len() != rows * cols {
            return Err(TropError::Shape {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let denom = common_denominator(entries.iter().map(|v| &v.0));
        if denom > MAX_COMPONENT {
            return Err(TropError::DenominatorTooLarge(denom));
        }
        let mut grid = Vec::with_capacity(entries.len());
        for v in &entries {
            let scaled = v.0 * Rational::from_integer(denom);
            let n = *scaled.numer();
            if n.abs() > (1i64 << 52) {
                return Err(TropError::DenominatorTooLarge(denom));
            }
            grid.push(n);
        }
        Ok(TropMatrix {
            rows,
            cols,
            entries,
            grid,
            denom,
        })
    }

    pub fn from_rows(rows: &[Vec<TropValue>]) -> Result<Self, TropError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(TropError::Ragged);
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, TropError> {
        let rows: Vec<Vec<TropValue>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| TropValue::int(v)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> TropValue {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[TropValue] {
        &self.entries
    }

    pub fn row_vecs(&self) -> Vec<Vec<TropValue>> {
        self.entries
            .chunks(self.cols.max(1))
            .map(<[_]>::to_vec)
            .collect()
    }

    pub fn transpose(&self) -> TropMatrix {
        let mut out = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j));
            }
        }
        TropMatrix::new(self.cols, self.rows, out).expect("transpose keeps validity")
    }

    /// Entry scaled by the common denominator.
    #[inline]
    pub(crate) fn scaled(&self, i: usize, j: usize) -> i64 {
        self.grid[i * self.cols + j]
    }

    #[cfg(test)]
    pub(crate) fn denom(&self) -> i64 {
        self.denom
    }

    pub(crate) fn unscale(&self, v: i64) -> TropValue {
        TropValue(Rational::new(v, self.denom))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn min_entry(&self) -> Option<TropValue> {
        self.entries.iter().copied().min()
    }

    pub fn max_entry(&self) -> Option<TropValue> {
        self.entries.iter().copied().max()
    }

    pub fn submatrix(&self, sel: &SubmatrixSelector) -> TropMatrix {
        let mut out = Vec::with_capacity(sel.rows.len() * sel.cols.len());
        for &i in &sel.rows {
            for &j in &sel.cols {
                out.push(self.get(i, j));
            }
        }
        TropMatrix::new(sel.rows.len(), sel.cols.len(), out).expect("submatrix keeps validity")
    }
}

impl fmt::Debug for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TropMatrix{:?}", self.row_vecs())
    }
}

impl fmt::Display for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Square matrix with `A(i,j) = A(j,i)`, checked on construction.
#[derive(Clone, PartialEq, Eq)]
pub struct SymMatrix {
    inner: TropMatrix,
}

impl SymMatrix {
    pub fn new(m: TropMatrix) -> Result<Self, TropError> {
        if m.rows() != m.cols() {
            return Err(TropError::NotSquare(m.rows(), m.cols()));
        }
        for i in 0..m.rows() {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(TropError::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymMatrix { inner: m })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, TropError> {
        Self::new(TropMatrix::from_ints(rows)?)
    }

    pub fn from_rows(rows: &[Vec<TropValue>]) -> Result<Self, TropError> {
        Self::new(TropMatrix::from_rows(rows)?)
    }

    /// Build from the upper triangle (row-major, diagonal included).
    pub fn from_upper(n: usize, upper: &[TropValue]) -> Result<Self, TropError> {
        if upper.len() != n * (n + 1) / 2 {
            return Err(TropError::Shape {
                expected: n * (n + 1) / 2,
                found: upper.len(),
            });
        }
        let mut entries = vec![TropValue::ZERO; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                entries[i * n + j] = upper[k];
                entries[j * n + i] = upper[k];
                k += 1;
            }
        }
        Self::new(TropMatrix::new(n, n, entries)?)
    }

    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> TropValue {
        self.inner.get(i, j)
    }

    pub fn matrix(&self) -> &TropMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> TropMatrix {
        self.inner
    }

    /// Upper triangle, row-major, diagonal included.
    pub fn upper(&self) -> Vec<TropValue> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    pub fn principal(&self, keep: &[usize]) -> SymMatrix {
        let sel = SubmatrixSelector {
            rows: keep.to_vec(),
            cols: keep.to_vec(),
        };
        SymMatrix {
            inner: self.inner.submatrix(&sel),
        }
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymMatrix{:?}", self.inner.row_vecs())
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.inner, f)
    }
}

/// Serialized as a list of rows.
impl Serialize for SymMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.inner.row_vecs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<TropValue>>::deserialize(d)?;
        SymMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Row and column index sets of a submatrix. Indices are 0-based and inherited
/// from the parent matrix; the serialized form is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SelectorJson", into = "SelectorJson")]
pub struct SubmatrixSelector {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl SubmatrixSelector {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        SubmatrixSelector { rows, cols }
    }

    pub fn full(m: &TropMatrix) -> Self {
        SubmatrixSelector {
            rows: (0..m.rows()).collect(),
            cols: (0..m.cols()).collect(),
        }
    }

    pub fn principal(keep: Vec<usize>) -> Self {
        Self::new(keep.clone(), keep)
    }

    /// All indices except `row` (for rows) and `col` (for columns), the minor `A_{row,col}`.
    pub fn minor(n: usize, row: usize, col: usize) -> Self {
        SubmatrixSelector {
            rows: (0..n).filter(|&i| i != row).collect(),
            cols: (0..n).filter(|&j| j != col).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    pub fn transpose(&self) -> Self {
        SubmatrixSelector {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    pub(crate) fn check(&self, m: &TropMatrix) -> Result<(), TropError> {
        if !self.is_square() {
            return Err(TropError::NonSquareSelection(
                self.rows.len(),
                self.cols.len(),
            ));
        }
        let sorted = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if !sorted(&self.rows) || !sorted(&self.cols) {
            return Err(TropError::UnsortedSelection);
        }
        if self.rows.iter().any(|&i| i >= m.rows()) || self.cols.iter().any(|&j| j >= m.cols()) {
            return Err(TropError::IndexOutOfRange);
        }
        Ok(())
    }

    /// 1-based rendering, e.g. `rows {1,2,3} cols {1,2,5}`.
    pub fn display_1based(&self) -> String {
        let fmt = |v: &[usize]| {
            v.iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("rows {{{}}} cols {{{}}}", fmt(&self.rows), fmt(&self.cols))
    }
}

#[derive(Serialize, Deserialize)]
struct SelectorJson {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl From<SubmatrixSelector> for SelectorJson {
    fn from(s: SubmatrixSelector) -> Self {
        SelectorJson {
            rows: s.rows.iter().map(|i| i + 1).collect(),
            cols: s.cols.iter().map(|j| j + 1).collect(),
        }
    }
}

impl TryFrom<SelectorJson> for SubmatrixSelector {
    type Error = TropError;
    fn try_from(s: SelectorJson) -> Result<Self, Self::Error> {
        if s.rows.contains(&0) || s.cols.contains(&0) {
            return Err(TropError::IndexOutOfRange);
        }
        Ok(SubmatrixSelector {
            rows: s.rows.iter().map(|i| i - 1).collect(),
            cols: s.cols.iter().map(|j| j - 1).collect(),
        })
    }
}

/// Every `k`-subset of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
