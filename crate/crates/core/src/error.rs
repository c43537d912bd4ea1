use std::fmt;

use crate::tree::Position;

/// Errors raised by tree, automaton, homomorphism, bimorphism, transducer
/// and grammar operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("position {0} does not occur in the tree")]
    InvalidPosition(Position),
    #[error("variable x{0} is not bound by the substitution")]
    UnboundVariable(usize),
    #[error("expected {expected} replacement trees, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("homomorphism is not linear: {0}")]
    NonlinearHom(String),
    #[error("no image for {0}")]
    UnmappedSymbol(String),
    #[error("class mismatch: {0}")]
    ClassMismatch(String),
    #[error("derivation exceeded the step bound of {0}")]
    NonterminationSuspected(usize),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("invalid grammar: {0}")]
    GrammarInvalid(String),
    #[error("malformed {what}: {msg}")]
    Malformed { what: &'static str, msg: String },
    #[error("{}", located(*line, msg))]
    Parse { line: usize, msg: String },
}

/// Line 0 marks errors not tied to a line of a file.
fn located(line: usize, msg: &str) -> String {
    if line == 0 {
        msg.to_string()
    } else {
        format!("line {line}: {msg}")
    }
}

impl Error {
    /// Stable kebab-case name used by the command-line front-end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidPosition(_) => "invalid-position",
            Error::UnboundVariable(_) => "unbound-variable",
            Error::ArityMismatch { .. } => "arity-mismatch",
            Error::AlphabetMismatch(_) => "alphabet-mismatch",
            Error::NonlinearHom(_) => "nonlinear-hom",
            Error::UnmappedSymbol(_) => "unmapped-symbol",
            Error::ClassMismatch(_) => "class-mismatch",
            Error::NonterminationSuspected(_) => "nontermination-suspected",
            Error::UnsupportedShape(_) => "unsupported-shape",
            Error::GrammarInvalid(_) => "grammar-invalid",
            Error::Malformed { .. } => "malformed",
            Error::Parse { .. } => "parse-error",
        }
    }

    pub(crate) fn malformed(what: &'static str, msg: impl fmt::Display) -> Self {
        Error::Malformed {
            what,
            msg: msg.to_string(),
        }
    }

    pub(crate) fn parse(line: usize, msg: impl fmt::Display) -> Self {
        Error::Parse {
            line,
            msg: msg.to_string(),
        }
    }

    /// Attaches a line number to errors coming from a nested parser.
    pub(crate) fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse { msg, .. } => Error::Parse { line, msg },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
