//! The search query language: lexing, parsing and canonical printing.
//!
//! A query is a tree of `path op literal` comparisons joined with `&`
//! (binds tighter) and `|`, for example
//! `type = "Extract Method" & extractMethod.extractedLines >= 10`.

mod ast;
pub(crate) mod format;
mod lexer;
mod parser;

use std::fmt;

pub use ast::{Comparison, ComparisonOp, FieldPath, Literal, NumLiteral, QueryAst, RegexLiteral};
pub use format::{format_query, quote};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse_query;

/// Syntax error with the byte span it refers to.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
    pub length: usize,
}

impl ParseError {
    pub fn new(message: impl Into<String>, offset: usize, length: usize) -> Self {
        ParseError {
            message: message.into(),
            offset,
            length,
        }
    }

    pub(crate) fn at_token(message: impl Into<String>, token: &Token) -> Self {
        Self::new(message, token.offset, token.len())
    }

    /// Two-line rendering of `input` with a caret run under the error span.
    pub fn caret_display(&self, input: &str) -> String {
        let prefix = input.get(..self.offset).unwrap_or(input);
        let pad = prefix.chars().count();
        let width = input
            .get(self.offset..self.offset + self.length)
            .map_or(1, |s| s.chars().count().max(1));
        format!("{input}\n{}{}", " ".repeat(pad), "^".repeat(width))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)
    }
}
