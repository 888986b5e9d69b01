use std::fmt;
use std::str::FromStr;

use super::NormalFormError;
use crate::trop::SymMatrix;
use crate::value::{format_rational, parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormCell {
    Blank,
    Const(Rational),
    Plus,
}

/// A symmetric pattern of blank, constant and strictly positive cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormMatrix {
    n: usize,
    cells: Vec<FormCell>,
}

impl FormMatrix {
    pub fn new(n: usize, cells: Vec<FormCell>) -> Result<Self, NormalFormError> {
        if cells.len() != n * n {
            return Err(NormalFormError::CellCount {
                expected: n * n,
                found: cells.len(),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if cells[i * n + j] != cells[j * n + i] {
                    return Err(NormalFormError::AsymmetricForm(j, i));
                }
            }
        }
        for c in &cells {
            if let FormCell::Const(v) = c {
                if *v < Rational::from(0) {
                    return Err(NormalFormError::NegativeFormConstant);
                }
            }
        }
        Ok(FormMatrix { n, cells })
    }

    pub fn blank(n: usize) -> Self {
        FormMatrix {
            n,
            cells: vec![FormCell::Blank; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> FormCell {
        self.cells[i * self.n + j]
    }

    pub fn cells(&self) -> &[FormCell] {
        &self.cells
    }

    /// Parse a grid body of `n` rows of `n` tokens (`.`, `+` or a rational),
    /// optionally preceded by a header line `n form`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, NormalFormError> {
        let mut rows: Vec<(usize, Vec<(usize, &str)>)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("");
            let mut toks = Vec::new();
            let mut col = 0;
            for tok in body.split_whitespace() {
                let at = body[col..].find(tok).map_or(col, |p| p + col);
                toks.push((at + 1, tok));
                col = at + tok.len();
            }
            if !toks.is_empty() {
                rows.push((ln + 1, toks));
            }
        }
        if let Some((_, first)) = rows.first() {
            if first.len() == 2 && first[1].1 == "form" {
                rows.remove(0);
            }
        }
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for (line, toks) in &rows {
            if toks.len() != n {
                return Err(NormalFormError::FormParse {
                    line: *line,
                    column: 1,
                    message: format!("expected {n} cells, found {}", toks.len()),
                });
            }
            for &(column, tok) in toks {
                cells.push(match tok {
                    "." => FormCell::Blank,
                    "+" => FormCell::Plus,
                    _ => FormCell::Const(parse_rational(tok).map_err(|e| {
                        NormalFormError::FormParse {
                            line: *line,
                            column,
                            message: e.to_string(),
                        }
                    })?),
                });
            }
        }
        Self::new(n, cells)
    }
}

impl FromStr for FormMatrix {
    type Err = NormalFormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| match self.get(i, j) {
                    FormCell::Blank => ".".to_string(),
                    FormCell::Plus => "+".to_string(),
                    FormCell::Const(v) => format_rational(&v),
                })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Constants match exactly, `+` cells are strictly positive, blanks are free.
pub fn matches_form(a: &SymMatrix, form: &FormMatrix) -> Result<bool, NormalFormError> {
    if a.n() != form.n() {
        return Err(NormalFormError::SizeMismatch {
            expected: form.n(),
            found: a.n(),
        });
    }
    let n = a.n();
    Ok((0..n).all(|i| {
        (0..n).all(|j| match form.get(i, j) {
            FormCell::Blank => true,
            FormCell::Const(c) => a.get(i, j).rational() == c,
            FormCell::Plus => a.get(i, j).is_positive(),
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> SymMatrix {
        SymMatrix::from_ints(&[&[0, 2, 1], &[2, 0, 3], &[1, 3, 0]]).unwrap()
    }

    #[test]
    fn listed_forms_match() {
        let a = example();
        for text in [
            "0 + +\n+ 0 +\n+ + 0",
            "0 2 .\n2 0 +\n. + 0",
            ". + +\n+ 0 +\n+ + 0",
            "0 2 1\n2 0 3\n1 3 0",
        ] {
            let f: FormMatrix = text.parse().unwrap();
            assert!(matches_form(&a, &f).unwrap(), "{text}");
        }
        let bad: FormMatrix = "+ + +\n+ 0 +\n+ + 0".parse().unwrap();
        assert!(!matches_form(&a, &bad).unwrap());
        assert!(matches_form(&a, &FormMatrix::blank(3)).unwrap());
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let f: FormMatrix = "3 form\n. 0 1/2  # comment\n0 + .\n1/2 . 0\n"
            .parse()
            .unwrap();
        assert_eq!(f.get(0, 2), FormCell::Const(Rational::new(1, 2)));
        let again: FormMatrix = f.to_string().parse().unwrap();
        assert_eq!(again, f);
        assert!(matches!(
            "0 +\n. 0".parse::<FormMatrix>(),
            Err(NormalFormError::AsymmetricForm(0, 1))
        ));
        match "0 x\nx 0".parse::<FormMatrix>() {
            Err(NormalFormError::FormParse { line, column, .. }) => {
                assert_eq!((line, column), (1, 3));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            matches_form(&example(), &FormMatrix::blank(2)),
            Err(NormalFormError::SizeMismatch { .. })
        ));
    }
}
