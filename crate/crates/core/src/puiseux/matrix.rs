use serde::{Deserialize, Serialize};

use super::field::Coeff;
use super::series::PuiseuxSeries;
use super::PuiseuxError;
use crate::trop::TropMatrix;
use crate::value::{Rational, TropValue};

/// Dense matrix of Puiseux series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Coeff", deserialize = "F: Coeff"))]
pub struct SeriesMatrix<F> {
    rows: usize,
    cols: usize,
    entries: Vec<PuiseuxSeries<F>>,
}

impl<F: Coeff> SeriesMatrix<F> {
    pub fn new(
        rows: usize,
        cols: usize,
        entries: Vec<PuiseuxSeries<F>>,
    ) -> Result<Self, PuiseuxError> {
        if entries.len() != rows * cols {
            return Err(PuiseuxError::Shape {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(SeriesMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> PuiseuxSeries<F>) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        SeriesMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PuiseuxSeries<F> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PuiseuxSeries<F>) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[PuiseuxSeries<F>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Smallest cutoff among the entries.
    pub fn common_cutoff(&self) -> Option<Rational> {
        self.entries.iter().map(|e| e.cutoff()).min()
    }

    /// Every entry truncated to the common cutoff.
    pub fn truncated(&self) -> Self {
        match self.common_cutoff() {
            Some(c) => self.map(|e| e.truncate(c)),
            None => self.clone(),
        }
    }

    pub fn map(&self, f: impl Fn(&PuiseuxSeries<F>) -> PuiseuxSeries<F>) -> Self {
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Entrywise degree; `None` if some entry is zero to its cutoff.
    pub fn tropicalize(&self) -> Option<TropMatrix> {
        let vals: Option<Vec<TropValue>> = self
            .entries
            .iter()
            .map(|e| e.deg().map(TropValue))
            .collect();
        TropMatrix::new(self.rows, self.cols, vals?).ok()
    }

    /// Determinant by Laplace expansion along the first row.
    pub fn det(&self) -> Result<PuiseuxSeries<F>, PuiseuxError> {
        if self.rows != self.cols {
            return Err(PuiseuxError::NotSquare(self.rows, self.cols));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.laplace(0, &idx))
    }

    fn laplace(&self, row: usize, cols: &[usize]) -> PuiseuxSeries<F> {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc: Option<PuiseuxSeries<F>> = None;
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = self.get(row, c).mul(&self.laplace(row + 1, &rest));
            let term = if k % 2 == 1 { term.neg() } else { term };
            acc = Some(match acc {
                Some(a) => a.add(&term),
                None => term,
            });
        }
        acc.expect("nonempty")
    }

    /// Solve `self · x = rhs` by Cramer's rule.
    pub fn solve(&self, rhs: &[PuiseuxSeries<F>]) -> Result<Vec<PuiseuxSeries<F>>, PuiseuxError> {
        let d = self.det()?;
        if d.is_zero_to_cutoff() {
            return Err(PuiseuxError::SingularSystem);
        }
        if rhs.len() != self.rows {
            return Err(PuiseuxError::Shape {
                expected: self.rows,
                found: rhs.len(),
            });
        }
        (0..self.cols)
            .map(|j| {
                let mut m = self.clone();
                for (i, v) in rhs.iter().enumerate() {
                    m.set(i, j, v.clone());
                }
                m.det()?.div(&d)
            })
            .collect()
    }

    /// Rank modulo the cutoff: Gaussian elimination pivoting on a
    /// minimal-degree entry; entries zero to their cutoff count as zero.
    ///
    /// A min-plus shadow of the elimination tracks the degree each entry
    /// would have without cancellation. An entry is only accepted as zero if
    /// its cutoff lies strictly above that degree; otherwise the precision is
    /// too small to tell and the result is `CutoffExhausted`.
    pub fn series_rank(&self) -> Result<usize, PuiseuxError> {
        let mut m: Vec<Vec<PuiseuxSeries<F>>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut shadow: Vec<Vec<Option<Rational>>> = m
            .iter()
            .map(|row| row.iter().map(|e| e.deg()).collect())
            .collect();
        let mut rows: Vec<usize> = (0..self.rows).collect();
        let mut cols: Vec<usize> = (0..self.cols).collect();
        let mut rank = 0;
        loop {
            let pivot = rows
                .iter()
                .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
                .filter_map(|(i, j)| m[i][j].deg().map(|d| (d, i, j)))
                .min();
            let Some((_, pi, pj)) = pivot else {
                for &i in &rows {
                    for &j in &cols {
                        if let Some(s) = shadow[i][j] {
                            if m[i][j].cutoff() <= s {
                                return Err(PuiseuxError::CutoffExhausted);
                            }
                        }
                    }
                }
                return Ok(rank);
            };
            rows.retain(|&i| i != pi);
            cols.retain(|&j| j != pj);
            let inv = m[pi][pj].inv()?;
            let sp = shadow[pi][pj].expect("pivot has a degree");
            for &i in &rows {
                let factor = m[i][pj].mul(&inv);
                for &j in &cols {
                    let upd = factor.mul(&m[pi][j]);
                    m[i][j] = m[i][j].sub(&upd);
                    if let (Some(a), Some(b)) = (shadow[i][pj], shadow[pi][j]) {
                        let via = a + b - sp;
                        shadow[i][j] = Some(shadow[i][j].map_or(via, |s| s.min(via)));
                    }
                }
            }
            rank += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::{Fp, Q};
    use super::*;

    fn c<F: Coeff>(v: i64, e: i64) -> PuiseuxSeries<F> {
        PuiseuxSeries::monomial(F::from_i64(v), Rational::from(e), Rational::from(20))
    }

    #[test]
    fn identity_has_full_rank() {
        let m: SeriesMatrix<Q> = SeriesMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c(1, 0)
            } else {
                PuiseuxSeries::zero_to(Rational::from(20))
            }
        });
        assert_eq!(m.series_rank().unwrap(), 3);
        assert_eq!(m.det().unwrap(), c(1, 0));
    }

    #[test]
    fn dependent_column_drops_rank() {
        let a: SeriesMatrix<Fp> =
            SeriesMatrix::from_fn(3, 2, |i, j| c((i * 3 + j + 2) as i64, (i + j) as i64));
        let m = SeriesMatrix::from_fn(3, 3, |i, j| {
            if j < 2 {
                a.get(i, j).clone()
            } else {
                a.get(i, 0).add(a.get(i, 1))
            }
        });
        assert_eq!(m.series_rank().unwrap(), 2);
        assert!(m.det().unwrap().is_zero_to_cutoff());
    }

    #[test]
    fn cramer_solve() {
        let m: SeriesMatrix<Q> =
            SeriesMatrix::from_fn(2, 2, |i, j| c((1 + i + 2 * j) as i64, (i * j) as i64));
        let x = m.solve(&[c(1, 0), c(2, 1)]).unwrap();
        for i in 0..2 {
            let lhs = m.get(i, 0).mul(&x[0]).add(&m.get(i, 1).mul(&x[1]));
            let rhs = if i == 0 { c(1, 0) } else { c(2, 1) };
            assert!(lhs.sub(&rhs).is_zero_to_cutoff());
        }
    }

    #[test]
    fn tiny_cutoff_is_reported() {
        let s = |v: i64, e: i64, cut: i64| {
            PuiseuxSeries::<Q>::monomial(Q::from_i64(v), Rational::from(e), Rational::from(cut))
        };
        // The cancellation of the degree-0 term is visible below cutoff 1.
        let m = SeriesMatrix::from_fn(2, 2, |_, _| s(1, 0, 1));
        assert_eq!(m.series_rank().unwrap(), 1);
        // [[1, t^2], [t^2, t^4]] cut at 3: the Schur entry would live at degree 4.
        let m = SeriesMatrix::from_fn(2, 2, |i, j| s(1, 2 * (i + j) as i64, 3));
        assert_eq!(m.series_rank(), Err(PuiseuxError::CutoffExhausted));
        let m = SeriesMatrix::from_fn(2, 2, |i, j| s(1, 2 * (i + j) as i64, 6));
        assert_eq!(m.series_rank().unwrap(), 1);
    }
}
