//! Boolean evaluation of queries against JSON documents.

mod value;

use regex::Regex;
use serde_json::Value;

use crate::query::{Comparison, ComparisonOp, Literal, QueryAst};

pub use value::{number_to_decimal, resolve_path, FieldValue};

/// Applies one comparison to a resolved value.
///
/// Arrays use exists semantics, except `!=` which is the negation of the
/// `=` result so that `p != l` is always the complement of `p = l`.
pub fn compare(value: &FieldValue<'_>, op: ComparisonOp, literal: &Literal) -> bool {
    let matcher = match (op, literal) {
        (ComparisonOp::Match, Literal::Str(text)) => Some(string_matcher(text)),
        (ComparisonOp::Match, Literal::Num(num)) => Some(string_matcher(num.lexeme())),
        _ => None,
    };
    compare_with(value, op, literal, matcher.as_ref())
}

fn compare_with(
    value: &FieldValue<'_>,
    op: ComparisonOp,
    literal: &Literal,
    matcher: Option<&Regex>,
) -> bool {
    if op == ComparisonOp::Neq {
        return !compare_with(value, ComparisonOp::Eq, literal, None);
    }
    match value {
        FieldValue::Array(items) => items
            .iter()
            .any(|item| compare_with(item, op, literal, matcher)),
        FieldValue::Missing | FieldValue::Null | FieldValue::Object(_) => false,
        FieldValue::Bool(_) => false,
        FieldValue::Num(n) => match (op, literal) {
            (ComparisonOp::Eq, Literal::Num(l)) => *n == l.value(),
            (ComparisonOp::Lt, Literal::Num(l)) => *n < l.value(),
            (ComparisonOp::Le, Literal::Num(l)) => *n <= l.value(),
            (ComparisonOp::Gt, Literal::Num(l)) => *n > l.value(),
            (ComparisonOp::Ge, Literal::Num(l)) => *n >= l.value(),
            _ => false,
        },
        FieldValue::Str(s) => {
            let s: &str = s;
            match (op, literal) {
                (ComparisonOp::Eq, Literal::Str(l)) => s == l,
                (ComparisonOp::Eq, Literal::Num(l)) => s == l.lexeme(),
                (ComparisonOp::Match, Literal::Regex(re)) => re.regex().is_match(s),
                (ComparisonOp::Match, _) => matcher.is_some_and(|re| re.is_match(s)),
                (ComparisonOp::Lt, Literal::Str(l)) => s < l.as_str(),
                (ComparisonOp::Le, Literal::Str(l)) => s <= l.as_str(),
                (ComparisonOp::Gt, Literal::Str(l)) => s > l.as_str(),
                (ComparisonOp::Ge, Literal::Str(l)) => s >= l.as_str(),
                _ => false,
            }
        }
    }
}

/// `~` with a plain string compiles it as a case-sensitive pattern; text
/// that is not a valid pattern is searched for literally.
fn string_matcher(text: &str) -> Regex {
    Regex::new(text).unwrap_or_else(|_| {
        Regex::new(&regex::escape(text)).expect("escaped text is a valid pattern")
    })
}

/// Evaluates `ast` against one document.
pub fn eval_query(ast: &QueryAst, doc: &Value) -> bool {
    PreparedQuery::new(ast).matches(doc)
}

/// A query with its string patterns compiled once, for evaluating many
/// documents.
#[derive(Debug, Clone)]
pub struct PreparedQuery<'q> {
    root: Node<'q>,
}

#[derive(Debug, Clone)]
enum Node<'q> {
    Or(Box<Node<'q>>, Box<Node<'q>>),
    And(Box<Node<'q>>, Box<Node<'q>>),
    Cmp(&'q Comparison, Option<Regex>),
}

impl<'q> PreparedQuery<'q> {
    pub fn new(ast: &'q QueryAst) -> Self {
        PreparedQuery {
            root: Node::build(ast),
        }
    }

    pub fn matches(&self, doc: &Value) -> bool {
        self.root.matches(doc)
    }
}

impl<'q> Node<'q> {
    fn build(ast: &'q QueryAst) -> Self {
        match ast {
            QueryAst::Or(l, r) => Node::Or(Box::new(Node::build(l)), Box::new(Node::build(r))),
            QueryAst::And(l, r) => Node::And(Box::new(Node::build(l)), Box::new(Node::build(r))),
            QueryAst::Cmp(cmp) => {
                let matcher = match (cmp.op, &cmp.literal) {
                    (ComparisonOp::Match, Literal::Str(text)) => Some(string_matcher(text)),
                    (ComparisonOp::Match, Literal::Num(num)) => Some(string_matcher(num.lexeme())),
                    _ => None,
                };
                Node::Cmp(cmp, matcher)
            }
        }
    }

    fn matches(&self, doc: &Value) -> bool {
        match self {
            Node::Or(l, r) => l.matches(doc) || r.matches(doc),
            Node::And(l, r) => l.matches(doc) && r.matches(doc),
            Node::Cmp(cmp, matcher) => {
                let value = resolve_path(doc, &cmp.path);
                compare_with(&value, cmp.op, &cmp.literal, matcher.as_ref())
            }
        }
    }
}

/// Comparisons every matching document must satisfy: the leaves reachable
/// from the root through `&` nodes only.
pub fn index_candidates(ast: &QueryAst) -> Vec<&Comparison> {
    let mut out = Vec::new();
    collect_conjuncts(ast, &mut out);
    out
}

fn collect_conjuncts<'q>(ast: &'q QueryAst, out: &mut Vec<&'q Comparison>) {
    match ast {
        QueryAst::And(l, r) => {
            collect_conjuncts(l, out);
            collect_conjuncts(r, out);
        }
        QueryAst::Cmp(cmp) => out.push(cmp),
        QueryAst::Or(..) => {}
    }
}

/// Sort key for ordering documents by a path: arrays sort by their first
/// element.
pub(crate) fn sort_value<'a>(value: FieldValue<'a>) -> FieldValue<'a> {
    match value {
        FieldValue::Array(mut items) => {
            if items.is_empty() {
                FieldValue::Missing
            } else {
                sort_value(items.swap_remove(0))
            }
        }
        other => other,
    }
}
