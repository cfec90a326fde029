//! Text formats: a vector file holds one decimal value per line, a groups
//! file one positive integer group size per line. Blank lines are skipped.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::Error;
use crate::grouped::GroupedVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: cannot parse {content:?} as a number")]
    Malformed { line: usize, content: String },
    #[error("line {line}: value is not finite")]
    NonFinite { line: usize },
    #[error("line {line}: group size must be a positive integer")]
    ZeroGroup { line: usize },
    #[error("no values found")]
    Empty,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("output: {0}")]
    Output(String),
}

impl HarnessError {
    /// True when the failure is a solver running out of iterations rather
    /// than bad input.
    pub fn is_nonconvergence(&self) -> bool {
        matches!(self, HarnessError::Core(Error::NonConvergence(_)))
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>, ParseError> {
    let mut out = Vec::new();
    for (line, content) in lines(text) {
        let v: f64 = content.parse().map_err(|_| ParseError::Malformed {
            line,
            content: content.to_string(),
        })?;
        if !v.is_finite() {
            return Err(ParseError::NonFinite { line });
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(out)
}

pub fn parse_groups(text: &str) -> Result<Vec<usize>, ParseError> {
    let mut out = Vec::new();
    for (line, content) in lines(text) {
        let v: usize = content.parse().map_err(|_| ParseError::Malformed {
            line,
            content: content.to_string(),
        })?;
        if v == 0 {
            return Err(ParseError::ZeroGroup { line });
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a vector file and an optional groups file; without one the vector
/// forms a single group.
pub fn load_instance(vector: &Path, groups: Option<&Path>) -> Result<GroupedVector, HarnessError> {
    let values = parse_vector(&read(vector)?).map_err(|source| HarnessError::Parse {
        path: vector.to_path_buf(),
        source,
    })?;
    let sizes = match groups {
        Some(path) => parse_groups(&read(path)?).map_err(|source| HarnessError::Parse {
            path: path.to_path_buf(),
            source,
        })?,
        None => vec![values.len()],
    };
    Ok(GroupedVector::new(values, &sizes)?)
}
