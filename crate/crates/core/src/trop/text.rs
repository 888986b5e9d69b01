//! Plain-text and JSON matrix formats.
//!
//! Text: a header `m n` or `n sym`, then all entries row-major as integers or
//! `p/q`, separated by whitespace. `#` starts a comment that runs to the end
//! of the line. JSON: `{"rows": m, "cols": n, "symmetric": bool, "entries": [[..]]}`
//! with entries as integers or `"p/q"` strings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{SymMatrix, TropMatrix};
use crate::value::{parse_rational, TropValue};

/// A parse failure with a 1-based position in the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct MatrixParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed matrix, symmetric when the input declared it so.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixInput {
    General(TropMatrix),
    Symmetric(SymMatrix),
}

impl MatrixInput {
    pub fn matrix(&self) -> &TropMatrix {
        match self {
            MatrixInput::General(m) => m,
            MatrixInput::Symmetric(s) => s.matrix(),
        }
    }

    /// The symmetric view, also for general input that happens to be symmetric.
    pub fn to_symmetric(&self) -> Result<SymMatrix, super::TropError> {
        match self {
            MatrixInput::General(m) => SymMatrix::new(m.clone()),
            MatrixInput::Symmetric(s) => Ok(s.clone()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    #[serde(default)]
    symmetric: bool,
    entries: Vec<Vec<TropValue>>,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokens(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (l, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
            out.push(Token {
                text: &tail[..len],
                line: l + 1,
                column: line[..offset + start].chars().count() + 1,
            });
            offset += start + len;
            rest = &tail[len..];
        }
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> MatrixParseError {
    MatrixParseError {
        line,
        column,
        message: message.into(),
    }
}

fn parse_size(t: &Token<'_>) -> Result<usize, MatrixParseError> {
    t.text
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            err(
                t.line,
                t.column,
                format!("`{}` is not a positive size", t.text),
            )
        })
}

fn parse_text(text: &str) -> Result<MatrixInput, MatrixParseError> {
    let toks = tokens(text);
    let (Some(a), Some(b)) = (toks.first(), toks.get(1)) else {
        return Err(err(1, 1, "missing header `m n` or `n sym`"));
    };
    let rows = parse_size(a)?;
    let (cols, symmetric) = if b.text == "sym" {
        (rows, true)
    } else {
        (parse_size(b)?, false)
    };
    let body = &toks[2..];
    if body.len() != rows * cols {
        let (line, column) = body
            .get(rows * cols)
            .or(body.last())
            .map_or((b.line, b.column), |t| (t.line, t.column));
        return Err(err(
            line,
            column,
            format!("expected {} entries, found {}", rows * cols, body.len()),
        ));
    }
    let entries = body
        .iter()
        .map(|t| {
            parse_rational(t.text)
                .map(TropValue)
                .map_err(|e| err(t.line, t.column, e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m =
        TropMatrix::new(rows, cols, entries).map_err(|e| err(a.line, a.column, e.to_string()))?;
    if symmetric {
        SymMatrix::new(m)
            .map(MatrixInput::Symmetric)
            .map_err(|e| err(a.line, a.column, e.to_string()))
    } else {
        Ok(MatrixInput::General(m))
    }
}

fn parse_json(text: &str) -> Result<MatrixInput, MatrixParseError> {
    let j: JsonMatrix =
        serde_json::from_str(text).map_err(|e| err(e.line(), e.column(), e.to_string()))?;
    if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
        return Err(err(1, 1, format!("entries are not {}x{}", j.rows, j.cols)));
    }
    let m = TropMatrix::from_rows(&j.entries).map_err(|e| err(1, 1, e.to_string()))?;
    if j.symmetric {
        SymMatrix::new(m)
            .map(MatrixInput::Symmetric)
            .map_err(|e| err(1, 1, e.to_string()))
    } else {
        Ok(MatrixInput::General(m))
    }
}

/// Parse either format; input whose first non-blank character is `{` is JSON.
pub fn parse_matrix(text: &str) -> Result<MatrixInput, MatrixParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

/// Text form of `m`, with an `n sym` header when `symmetric`.
pub fn format_matrix(m: &TropMatrix, symmetric: bool) -> String {
    let mut s = if symmetric {
        format!("{} sym\n", m.rows())
    } else {
        format!("{} {}\n", m.rows(), m.cols())
    };
    let cells: Vec<String> = m.entries().iter().map(|v| v.to_string()).collect();
    let width = cells.iter().map(String::len).max().unwrap_or(1);
    for row in cells.chunks(m.cols()) {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

/// JSON form of `m`.
pub fn matrix_to_json(m: &TropMatrix, symmetric: bool) -> serde_json::Value {
    let j = JsonMatrix {
        rows: m.rows(),
        cols: m.cols(),
        symmetric,
        entries: m.row_vecs(),
    };
    serde_json::to_value(j).expect("matrix serializes")
}
