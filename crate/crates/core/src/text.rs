//! Line-oriented tokenizing shared by the matrix and system file formats.

use std::iter::Peekable;
use std::str::Lines;

use crate::error::{Error, Result};
use crate::exactmat::ExactMatrix;
use crate::field::{FieldTag, Scalar};

#[derive(Debug, Clone)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    /// 1-based.
    pub column: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Line<'a> {
    /// 1-based.
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
}

/// Yields non-empty lines with `#` comments stripped.
pub(crate) struct LineReader<'a> {
    inner: Peekable<std::iter::Enumerate<Lines<'a>>>,
    last_line: usize,
}

impl<'a> LineReader<'a> {
    pub fn new(text: &'a str) -> Self {
        LineReader {
            inner: text.lines().enumerate().peekable(),
            last_line: 0,
        }
    }

    pub fn next_line(&mut self) -> Option<Line<'a>> {
        for (idx, raw) in self.inner.by_ref() {
            self.last_line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens = tokenize(content);
            if !tokens.is_empty() {
                return Some(Line {
                    number: idx + 1,
                    tokens,
                });
            }
        }
        None
    }

    pub fn expect_line(&mut self, what: &str) -> Result<Line<'a>> {
        let last = self.last_line;
        self.next_line().ok_or_else(|| {
            Error::syntax(
                last + 1,
                1,
                format!("unexpected end of input, expected {what}"),
            )
        })
    }
}

fn tokenize(content: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, c) in content.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(token_at(content, s, k));
                start = None;
            }
            (false, None) => start = Some(k),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(token_at(content, s, content.len()));
    }
    out
}

fn token_at(content: &str, start: usize, end: usize) -> Token<'_> {
    Token {
        text: &content[start..end],
        column: content[..start].chars().count() + 1,
    }
}

pub(crate) fn parse_count(line: &Line<'_>, tok: &Token<'_>) -> Result<usize> {
    tok.text.parse::<usize>().map_err(|_| {
        Error::syntax(
            line.number,
            tok.column,
            format!("expected a non-negative integer, got `{}`", tok.text),
        )
    })
}

/// Reads `rows` lines of `cols` scalars each. Zero-column matrices have no
/// row lines.
pub(crate) fn read_matrix_body(
    reader: &mut LineReader<'_>,
    rows: usize,
    cols: usize,
    tag: FieldTag,
) -> Result<ExactMatrix> {
    let mut data = Vec::with_capacity(rows * cols);
    if cols > 0 {
        for _ in 0..rows {
            let line = reader.expect_line("a matrix row")?;
            if line.tokens.len() != cols {
                return Err(Error::syntax(
                    line.number,
                    line.tokens.first().map_or(1, |t| t.column),
                    format!("expected {cols} entries, found {}", line.tokens.len()),
                ));
            }
            for tok in &line.tokens {
                let v = Scalar::parse(tok.text, tag)
                    .map_err(|msg| Error::syntax(line.number, tok.column, msg))?;
                data.push(v);
            }
        }
    }
    Ok(ExactMatrix::from_data(tag, rows, cols, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_columns() {
        let mut r = LineReader::new("# header\n\n  a  bc # trailing\nd\n");
        let l = r.next_line().unwrap();
        assert_eq!(l.number, 3);
        assert_eq!(l.tokens.len(), 2);
        assert_eq!(l.tokens[1].text, "bc");
        assert_eq!(l.tokens[1].column, 6);
        assert_eq!(r.next_line().unwrap().number, 4);
        assert!(r.next_line().is_none());
        assert!(matches!(
            r.expect_line("x"),
            Err(Error::Syntax { line: 5, .. })
        ));
    }
}
