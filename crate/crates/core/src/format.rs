//! Line-oriented text formats.
//!
//! `.lat`:
//! ```text
//! n 3
//! name CHAIN3
//! 0 1 2
//! 1 1 2
//! 2 2 2
//! ```
//! The rows form the join table; element 0 is the zero.
//!
//! `.sr`: `n`, optional `name`, `zero <i>`, the addition rows, one blank line,
//! the multiplication rows.
//!
//! `.srs`: `lattice <name>` followed by one image array per line.
//!
//! `.smod`: `semiring <path>`, `m <count>`, the addition rows, one blank line,
//! then one action row per semiring element.
//!
//! Writers emit the canonical form: single spaces, `\n` line endings, a final
//! newline. Parsing a canonical file and writing it back reproduces it byte
//! for byte.

use std::fmt::Write as _;

use thiserror::Error;

use crate::endo::{EndoError, EndoSubsemiring, Endomorphism};
use crate::lattice::{FiniteLattice, LatticeError};
use crate::semimodule::{validate_semimodule, Semimodule, SemimoduleError};
use crate::semiring::{validate_semiring, FiniteSemiring, SemiringError};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Semimodule(#[from] SemimoduleError),
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines: Vec<&str> = text.split('\n').collect();
        if lines.last() == Some(&"") {
            lines.pop();
        }
        Lines { lines, pos: 0 }
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> FormatError {
        FormatError::Parse { line, column, message: message.into() }
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok((self.pos, l.strip_suffix('\r').unwrap_or(l)))
            }
            None => Err(self.error(self.pos + 1, 1, format!("unexpected end of input, expected {what}"))),
        }
    }

    fn keyword(&mut self, key: &str) -> Result<(usize, &'a str), FormatError> {
        let (line, text) = self.next(key)?;
        match text.split_once(' ') {
            Some((k, rest)) if k == key && !rest.is_empty() => Ok((line, rest)),
            _ => Err(self.error(line, 1, format!("expected `{key} <value>`"))),
        }
    }

    fn count(&mut self, key: &str) -> Result<usize, FormatError> {
        let (line, rest) = self.keyword(key)?;
        parse_index(rest, line, key.len() + 2, usize::MAX)
    }

    fn optional(&mut self, key: &str) -> Option<String> {
        let text = self.peek()?;
        let rest = text.strip_prefix(key)?.strip_prefix(' ')?;
        self.pos += 1;
        Some(rest.trim_end_matches('\r').to_string())
    }

    fn blank(&mut self) -> Result<(), FormatError> {
        let (line, text) = self.next("blank line")?;
        if !text.trim().is_empty() {
            return Err(self.error(line, 1, "expected a blank line"));
        }
        Ok(())
    }

    fn row(&mut self, width: usize, bound: usize) -> Result<Vec<usize>, FormatError> {
        let (line, text) = self.next("table row")?;
        let mut out = Vec::with_capacity(width);
        let mut column = 1;
        for token in text.split(' ') {
            if token.is_empty() {
                return Err(self.error(line, column, "expected a single space between entries"));
            }
            out.push(parse_index(token, line, column, bound)?);
            column += token.len() + 1;
        }
        if out.len() != width {
            return Err(self.error(line, column, format!("expected {width} entries, found {}", out.len())));
        }
        Ok(out)
    }

    fn table(&mut self, rows: usize, width: usize, bound: usize) -> Result<Vec<Vec<usize>>, FormatError> {
        (0..rows).map(|_| self.row(width, bound)).collect()
    }

    fn finish(&self) -> Result<(), FormatError> {
        match self.lines[self.pos..].iter().position(|l| !l.trim().is_empty()) {
            Some(i) => Err(self.error(self.pos + i + 1, 1, "unexpected trailing content")),
            None => Ok(()),
        }
    }
}

fn parse_index(token: &str, line: usize, column: usize, bound: usize) -> Result<usize, FormatError> {
    let v: usize = token.parse().map_err(|_| FormatError::Parse {
        line,
        column,
        message: format!("`{token}` is not a nonnegative integer"),
    })?;
    if v >= bound {
        return Err(FormatError::Parse { line, column, message: format!("index {v} out of range (< {bound})") });
    }
    Ok(v)
}

fn write_rows<'a>(out: &mut String, rows: impl Iterator<Item = &'a [usize]>) {
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
}

pub fn parse_lattice(text: &str) -> Result<FiniteLattice, FormatError> {
    let mut lines = Lines::new(text);
    let n = lines.count("n")?;
    let name = lines.optional("name");
    let rows = lines.table(n, n, n)?;
    lines.finish()?;
    let l = FiniteLattice::from_flat(n, rows.concat(), 0)?;
    Ok(match name {
        Some(name) => l.with_name(name),
        None => l,
    })
}

/// Serializes `l`, relabelled so that the zero is element 0.
pub fn write_lattice(l: &FiniteLattice) -> String {
    let l = if l.zero() == 0 { l.clone() } else { l.with_zero_first() };
    let mut out = format!("n {}\n", l.len());
    if let Some(name) = l.name() {
        writeln!(out, "name {name}").unwrap();
    }
    write_rows(&mut out, l.join_table().chunks(l.len().max(1)));
    out
}

pub fn parse_semiring(text: &str) -> Result<FiniteSemiring, FormatError> {
    let mut lines = Lines::new(text);
    let n = lines.count("n")?;
    let name = lines.optional("name");
    let (zero_line, zero_text) = lines.keyword("zero")?;
    let zero = parse_index(zero_text, zero_line, 6, n)?;
    let add = lines.table(n, n, n)?;
    lines.blank()?;
    let mul = lines.table(n, n, n)?;
    lines.finish()?;
    let r = validate_semiring(&add, &mul, zero)?;
    Ok(match name {
        Some(name) => r.with_name(name),
        None => r,
    })
}

pub fn write_semiring(r: &FiniteSemiring) -> String {
    let mut out = format!("n {}\n", r.len());
    if let Some(name) = r.name() {
        writeln!(out, "name {name}").unwrap();
    }
    writeln!(out, "zero {}", r.zero()).unwrap();
    write_rows(&mut out, r.add_rows().iter().map(Vec::as_slice));
    out.push('\n');
    write_rows(&mut out, r.mul_rows().iter().map(Vec::as_slice));
    out
}

/// A parsed `.srs` file, before the lattice reference is resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrsFile {
    pub lattice: String,
    pub members: Vec<Vec<usize>>,
}

impl SrsFile {
    pub fn resolve(&self, l: &FiniteLattice) -> Result<EndoSubsemiring, FormatError> {
        let members = self
            .members
            .iter()
            .map(|img| Endomorphism::new(l, img.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EndoSubsemiring::new(l, members)?)
    }
}

pub fn parse_subsemiring(text: &str) -> Result<SrsFile, FormatError> {
    let mut lines = Lines::new(text);
    let (_, lattice) = lines.keyword("lattice")?;
    let mut members = Vec::new();
    let mut width = None;
    while lines.peek().is_some_and(|l| !l.trim().is_empty()) {
        let probe = lines.peek().unwrap().split(' ').count();
        let row = lines.row(*width.get_or_insert(probe), usize::MAX)?;
        members.push(row);
    }
    lines.finish()?;
    Ok(SrsFile { lattice: lattice.to_string(), members })
}

pub fn write_subsemiring(lattice_name: &str, s: &EndoSubsemiring) -> String {
    let mut out = format!("lattice {lattice_name}\n");
    write_rows(&mut out, s.members().iter().map(Endomorphism::image));
    out
}

/// A parsed `.smod` file, before the semiring reference is resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmodFile {
    pub semiring: String,
    pub madd: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
}

impl SmodFile {
    pub fn resolve(&self, ring: Arc<FiniteSemiring>) -> Result<Semimodule, FormatError> {
        Ok(validate_semimodule(ring, &self.madd, &self.act)?)
    }
}

pub fn parse_semimodule(text: &str) -> Result<SmodFile, FormatError> {
    let mut lines = Lines::new(text);
    let (_, semiring) = lines.keyword("semiring")?;
    let m = lines.count("m")?;
    let madd = lines.table(m, m, m)?;
    lines.blank()?;
    let mut act = Vec::new();
    while lines.peek().is_some_and(|l| !l.trim().is_empty()) {
        act.push(lines.row(m, m)?);
    }
    lines.finish()?;
    Ok(SmodFile { semiring: semiring.to_string(), madd, act })
}

pub fn write_semimodule(semiring_path: &str, module: &Semimodule) -> String {
    let mut out = format!("semiring {semiring_path}\nm {}\n", module.len());
    write_rows(&mut out, module.madd_rows().iter().map(Vec::as_slice));
    out.push('\n');
    write_rows(&mut out, module.act_rows().iter().map(Vec::as_slice));
    out
}
