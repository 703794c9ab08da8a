use std::fmt;

use regex::{Regex, RegexBuilder};
use rust_decimal::Decimal;

/// Parse tree of a search query.
///
/// `&` and `|` are binary and chain to the right, so `a & b & c` is
/// `And(a, And(b, c))`.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryAst {
    Or(Box<QueryAst>, Box<QueryAst>),
    And(Box<QueryAst>, Box<QueryAst>),
    Cmp(Comparison),
}

impl QueryAst {
    pub fn or(left: QueryAst, right: QueryAst) -> Self {
        QueryAst::Or(Box::new(left), Box::new(right))
    }

    pub fn and(left: QueryAst, right: QueryAst) -> Self {
        QueryAst::And(Box::new(left), Box::new(right))
    }

    pub fn cmp(path: FieldPath, op: ComparisonOp, literal: Literal) -> Self {
        QueryAst::Cmp(Comparison { path, op, literal })
    }

    /// Number of comparison leaves.
    pub fn leaf_count(&self) -> usize {
        match self {
            QueryAst::Or(l, r) | QueryAst::And(l, r) => l.leaf_count() + r.leaf_count(),
            QueryAst::Cmp(_) => 1,
        }
    }
}

impl fmt::Display for QueryAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format_query(self))
    }
}

/// A single `path op literal` condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub path: FieldPath,
    pub op: ComparisonOp,
    pub literal: Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComparisonOp {
    Eq,
    Neq,
    Match,
    Lt,
    Le,
    Gt,
    Ge,
}

impl ComparisonOp {
    pub const ALL: [ComparisonOp; 7] = [
        ComparisonOp::Eq,
        ComparisonOp::Neq,
        ComparisonOp::Match,
        ComparisonOp::Lt,
        ComparisonOp::Le,
        ComparisonOp::Gt,
        ComparisonOp::Ge,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            ComparisonOp::Eq => "=",
            ComparisonOp::Neq => "!=",
            ComparisonOp::Match => "~",
            ComparisonOp::Lt => "<",
            ComparisonOp::Le => "<=",
            ComparisonOp::Gt => ">",
            ComparisonOp::Ge => ">=",
        }
    }

    pub fn from_symbol(symbol: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.symbol() == symbol)
    }

    pub fn is_range(self) -> bool {
        matches!(
            self,
            ComparisonOp::Lt | ComparisonOp::Le | ComparisonOp::Gt | ComparisonOp::Ge
        )
    }
}

impl fmt::Display for ComparisonOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Dotted field address such as `commit.size.files.changed`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldPath(Vec<String>);

impl FieldPath {
    /// Splits a dotted path; `None` if any segment is empty or contains a
    /// reserved character.
    pub fn parse(text: &str) -> Option<Self> {
        let segments: Vec<String> = text.split('.').map(str::to_owned).collect();
        Self::from_segments(segments)
    }

    pub fn from_segments(segments: Vec<String>) -> Option<Self> {
        if segments.is_empty() || !segments.iter().all(|s| is_valid_segment(s)) {
            return None;
        }
        Some(FieldPath(segments))
    }

    pub fn segments(&self) -> &[String] {
        &self.0
    }

    pub fn dotted(&self) -> String {
        self.0.join(".")
    }
}

fn is_valid_segment(segment: &str) -> bool {
    !segment.is_empty()
        && segment.chars().all(|c| {
            !c.is_whitespace()
                && !c.is_control()
                && !matches!(c, '"' | '(' | ')' | '&' | '|' | '.' | '=' | '<' | '>' | '~')
        })
}

impl fmt::Display for FieldPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dotted())
    }
}

/// Right-hand operand of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Str(String),
    Num(NumLiteral),
    Regex(RegexLiteral),
}

impl Literal {
    pub fn str(text: impl Into<String>) -> Self {
        Literal::Str(text.into())
    }

    /// Builds a numeric literal from a lexeme such as `-12.50`.
    pub fn num(lexeme: &str) -> Option<Self> {
        NumLiteral::parse(lexeme).map(Literal::Num)
    }

    pub fn regex(pattern: &str, case_insensitive: bool) -> Result<Self, regex::Error> {
        RegexLiteral::new(pattern, case_insensitive).map(Literal::Regex)
    }
}

/// Decimal number that remembers how it was written.
#[derive(Debug, Clone)]
pub struct NumLiteral {
    value: Decimal,
    lexeme: String,
}

impl NumLiteral {
    /// Accepts `[+-]?digits(.digits)?` within decimal range.
    pub fn parse(lexeme: &str) -> Option<Self> {
        if !is_numeric_lexeme(lexeme) {
            return None;
        }
        let unsigned = lexeme.strip_prefix('+').unwrap_or(lexeme);
        let value = unsigned.parse::<Decimal>().ok()?;
        Some(NumLiteral {
            value,
            lexeme: lexeme.to_owned(),
        })
    }

    pub fn value(&self) -> Decimal {
        self.value
    }

    pub fn lexeme(&self) -> &str {
        &self.lexeme
    }
}

impl PartialEq for NumLiteral {
    fn eq(&self, other: &Self) -> bool {
        self.lexeme == other.lexeme
    }
}

pub(crate) fn is_numeric_lexeme(text: &str) -> bool {
    let body = text.strip_prefix(['+', '-']).unwrap_or(text);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    all_digits(int) && frac.is_none_or(all_digits)
}

/// `/pattern/flags` literal, compiled when constructed.
#[derive(Debug, Clone)]
pub struct RegexLiteral {
    pattern: String,
    case_insensitive: bool,
    compiled: Regex,
}

impl RegexLiteral {
    pub fn new(pattern: &str, case_insensitive: bool) -> Result<Self, regex::Error> {
        let compiled = RegexBuilder::new(pattern)
            .case_insensitive(case_insensitive)
            .build()?;
        Ok(RegexLiteral {
            pattern: pattern.to_owned(),
            case_insensitive,
            compiled,
        })
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn case_insensitive(&self) -> bool {
        self.case_insensitive
    }

    pub fn regex(&self) -> &Regex {
        &self.compiled
    }
}

impl PartialEq for RegexLiteral {
    fn eq(&self, other: &Self) -> bool {
        self.pattern == other.pattern && self.case_insensitive == other.case_insensitive
    }
}
