//! Polytope files, the built-in catalog and the command-line front end.
//!
//! File format: a header line `d n`, then `n` rows of `d` integers. Lines
//! whose first non-blank character is `#` are ignored, as are blank lines.

pub mod catalog;
pub mod cli;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::lattice_geometry::{LatticeSide, LatticeVector, Polytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Which polytope the rows list vertices of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideHint {
    /// The moment polytope `Delta` in `M`.
    Primal,
    /// The dual `Delta*` in `N`, whose vertices are the rays.
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeFile {
    pub dim: usize,
    pub count: usize,
    pub rows: Vec<Vec<i64>>,
    pub side_hint: SideHint,
}

impl PolytopeFile {
    pub fn points(&self) -> Vec<LatticeVector> {
        self.rows.iter().map(|r| LatticeVector::from_i64(r)).collect()
    }

    pub fn polytope(&self) -> Result<Polytope, crate::lattice_geometry::GeometryError> {
        let side = match self.side_hint {
            SideHint::Primal => LatticeSide::M,
            SideHint::Dual => LatticeSide::N,
        };
        Polytope::from_lattice_points(&self.points(), side)
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn int_token<T: FromStr>(line: usize, tok: &Token<'_>, what: &str) -> Result<T, ParseError> {
    tok.text.parse().map_err(|_| ParseError {
        line,
        column: tok.column,
        message: format!("expected {what}, found `{}`", tok.text),
    })
}

pub fn parse_polytope(text: &str) -> Result<PolytopeFile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let last_line = text.lines().count().max(1);

    let Some((hline, header)) = lines.next() else {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "missing header `d n`".into(),
        });
    };
    let htoks = tokens(header);
    if htoks.len() != 2 {
        let column = htoks.get(2).map_or(header.len() + 1, |t| t.column);
        return Err(ParseError {
            line: hline,
            column,
            message: format!("header must be `d n`, found {} fields", htoks.len()),
        });
    }
    let dim: usize = int_token(hline, &htoks[0], "a dimension")?;
    let count: usize = int_token(hline, &htoks[1], "a point count")?;
    if dim == 0 {
        return Err(ParseError {
            line: hline,
            column: htoks[0].column,
            message: "dimension must be positive".into(),
        });
    }

    let mut rows = Vec::with_capacity(count);
    for (ln, line) in lines {
        let toks = tokens(line);
        if rows.len() == count {
            return Err(ParseError {
                line: ln,
                column: toks[0].column,
                message: format!("more than the {count} rows announced in the header"),
            });
        }
        if toks.len() != dim {
            let column = toks.get(dim).map_or(line.len() + 1, |t| t.column);
            return Err(ParseError {
                line: ln,
                column,
                message: format!("expected {dim} entries, found {}", toks.len()),
            });
        }
        let row = toks
            .iter()
            .map(|t| int_token::<i64>(ln, t, "a 64-bit integer"))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.len() != count {
        return Err(ParseError {
            line: last_line + 1,
            column: 1,
            message: format!("header announces {count} rows, found {}", rows.len()),
        });
    }
    Ok(PolytopeFile {
        dim,
        count,
        rows,
        side_hint: SideHint::Dual,
    })
}

pub fn serialize_polytope(file: &PolytopeFile) -> String {
    let mut out = format!("{} {}\n", file.dim, file.count);
    for r in &file.rows {
        let row: Vec<String> = r.iter().map(i64::to_string).collect();
        out += &row.join(" ");
        out.push('\n');
    }
    out
}

impl fmt::Display for PolytopeFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_polytope(self))
    }
}

/// Parses `7`, `-2/5` or `0.4` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (d != BigInt::from(0)).then(|| BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let whole: BigInt = format!("{int}{frac}").parse().ok()?;
        return Some(BigRational::new(whole, BigInt::from(10).pow(frac.len() as u32)));
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}
