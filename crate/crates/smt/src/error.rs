// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("`{op}` expects {expected} argument(s), got {found}")]
    Arity { op: String, expected: String, found: usize },
    #[error("sort error in `{op}`: {detail}")]
    Sort { op: String, detail: String },
    #[error("bad width: {0}")]
    Width(String),
    #[error("invalid symbol `{0}`")]
    Symbol(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value assigned to `{0}`")]
    MissingVariable(String),
    #[error("value for `{0}` does not match its declared sort")]
    SortMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("variable `{0}` used but not declared")]
    Undeclared(String),
    #[error("variable `{0}` declared more than once")]
    DuplicateDeclaration(String),
    #[error("variable `{0}` used with a sort different from its declaration")]
    SortConflict(String),
    #[error("assertion name `{0}` used more than once")]
    DuplicateAssertion(String),
    #[error("assertion `{0}` is not boolean")]
    NotBoolean(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("{0} entries requested, at most 16 are supported")]
    Entries(usize),
    #[error("physical address width {0} outside supported range 3..=56")]
    PaddrBits(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    Arity { op: String, expected: String, found: usize },
    Width(String),
    Undeclared(String),
    Unsupported(String),
    Document(DocError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::Arity { op, expected, found } => {
                write!(f, "arity error: `{op}` expects {expected} argument(s), got {found}")
            }
            ParseErrorKind::Width(msg) => write!(f, "width error: {msg}"),
            ParseErrorKind::Undeclared(name) => write!(f, "undeclared variable `{name}`"),
            ParseErrorKind::Unsupported(what) => write!(f, "unsupported construct: {what}"),
            ParseErrorKind::Document(err) => write!(f, "{err}"),
        }
    }
}

/// Parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl From<TermError> for ParseErrorKind {
    fn from(err: TermError) -> Self {
        match err {
            TermError::Arity { op, expected, found } => ParseErrorKind::Arity { op, expected, found },
            TermError::Symbol(s) => ParseErrorKind::Syntax(format!("invalid symbol `{s}`")),
            other => ParseErrorKind::Width(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search space of {bits} bits exceeds the limit of {max_bits}")]
pub struct SearchError {
    pub bits: u32,
    pub max_bits: u32,
}
