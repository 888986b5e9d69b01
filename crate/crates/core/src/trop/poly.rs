use std::collections::BTreeMap;
use std::fmt;

use super::perm::table;
use super::TropError;
use crate::value::{Rational, TropValue};

/// Tropical sum of terms `c ⊙ X1^e1 ⋯ Xm^em`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropPolynomial {
    nvars: usize,
    monomials: Vec<(TropValue, Vec<u32>)>,
}

impl TropPolynomial {
    pub fn new(monomials: Vec<(TropValue, Vec<u32>)>) -> Result<Self, TropError> {
        let nvars = monomials.first().ok_or(TropError::EmptyPolynomial)?.1.len();
        if monomials.iter().any(|(_, e)| e.len() != nvars) {
            return Err(TropError::ExponentLength);
        }
        Ok(TropPolynomial { nvars, monomials })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn monomials(&self) -> &[(TropValue, Vec<u32>)] {
        &self.monomials
    }

    /// Minimum of the linear forms at `point` and every index attaining it.
    pub fn eval(&self, point: &[Rational]) -> Result<(TropValue, Vec<usize>), TropError> {
        if point.len() != self.nvars {
            return Err(TropError::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut best: Option<Rational> = None;
        let mut arg = Vec::new();
        for (k, (c, e)) in self.monomials.iter().enumerate() {
            let v = e.iter().zip(point).fold(c.rational(), |acc, (&ei, &p)| {
                acc + p * Rational::from(ei as i64)
            });
            match best {
                Some(b) if v > b => {}
                Some(b) if v == b => arg.push(k),
                _ => {
                    best = Some(v);
                    arg.clear();
                    arg.push(k);
                }
            }
        }
        Ok((TropValue(best.expect("nonempty")), arg))
    }

    /// Double-min locus membership.
    pub fn on_hypersurface(&self, point: &[Rational]) -> Result<bool, TropError> {
        Ok(self.eval(point)?.1.len() >= 2)
    }
}

impl fmt::Display for TropPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = if self.nvars <= 3 {
            ["X", "Y", "Z"][..self.nvars]
                .iter()
                .map(|s| s.to_string())
                .collect()
        } else {
            (1..=self.nvars).map(|i| format!("X{i}")).collect()
        };
        let terms: Vec<String> = self
            .monomials
            .iter()
            .map(|(c, e)| {
                let mut s = String::new();
                if !c.is_zero() || e.iter().all(|&x| x == 0) {
                    s.push_str(&c.to_string());
                }
                for (name, &x) in names.iter().zip(e) {
                    match x {
                        0 => {}
                        1 => s.push_str(name),
                        _ => s.push_str(&format!("{name}^{x}")),
                    }
                }
                s
            })
            .collect();
        f.write_str(&terms.join(" ⊕ "))
    }
}

/// Tropical determinant of an `n×n` matrix of indeterminates, variable `X(i,j)` at index `i*n+j`.
pub fn determinantal_polynomial(n: usize) -> Result<TropPolynomial, TropError> {
    if n > super::perm::MAX_ENUMERATED {
        return Err(TropError::TooLarge(n));
    }
    let monos = table(n)
        .iter()
        .map(|p| {
            let mut e = vec![0u32; n * n];
            for (i, &c) in p.iter().enumerate() {
                e[i * n + c as usize] += 1;
            }
            (TropValue::ZERO, e)
        })
        .collect();
    TropPolynomial::new(monos)
}

/// Index of `X(i,j) = X(j,i)` among the `n(n+1)/2` upper-triangle variables.
pub fn upper_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

/// Symmetric tropical determinant: monomials identified under `X(i,j) = X(j,i)`, deduplicated.
pub fn symmetric_determinantal_polynomial(n: usize) -> Result<TropPolynomial, TropError> {
    if n > super::perm::MAX_ENUMERATED {
        return Err(TropError::TooLarge(n));
    }
    let m = n * (n + 1) / 2;
    let mut seen = BTreeMap::new();
    for p in table(n).iter() {
        let mut e = vec![0u32; m];
        for (i, &c) in p.iter().enumerate() {
            e[upper_index(n, i, c as usize)] += 1;
        }
        seen.entry(e).or_insert(());
    }
    TropPolynomial::new(seen.into_keys().map(|e| (TropValue::ZERO, e)).collect())
}
