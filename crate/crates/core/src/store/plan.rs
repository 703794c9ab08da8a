use std::fmt;

use serde::Serialize;

use super::index::SortedIndex;
use crate::eval::index_candidates;
use crate::query::{format::write_literal, Comparison, ComparisonOp, Literal, QueryAst};

/// How candidate documents are fetched before the residual check.
#[derive(Debug, Clone, PartialEq)]
pub enum AccessPath {
    FullScan,
    IndexEq {
        index: String,
        key: Literal,
    },
    IndexRange {
        index: String,
        lower: Option<RangeBound>,
        upper: Option<RangeBound>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeBound {
    pub literal: Literal,
    pub inclusive: bool,
}

/// Access path plus the predicate re-checked on every candidate. The
/// residual is always the whole query.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryPlan {
    pub access: AccessPath,
    pub residual: Option<QueryAst>,
}

impl fmt::Display for AccessPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lit = |l: &Literal| {
            let mut s = String::new();
            write_literal(l, &mut s);
            s
        };
        match self {
            AccessPath::FullScan => f.write_str("FullScan"),
            AccessPath::IndexEq { index, key } => write!(f, "IndexEq({index}, {})", lit(key)),
            AccessPath::IndexRange {
                index,
                lower,
                upper,
            } => {
                write!(f, "IndexRange({index}")?;
                if let Some(b) = lower {
                    write!(f, ", {} {}", if b.inclusive { ">=" } else { ">" }, lit(&b.literal))?;
                }
                if let Some(b) = upper {
                    write!(f, ", {} {}", if b.inclusive { "<=" } else { "<" }, lit(&b.literal))?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Serialize for AccessPath {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn indexable(literal: &Literal) -> bool {
    matches!(literal, Literal::Str(_) | Literal::Num(_))
}

/// Chooses an access path from the mandatory conjuncts of `ast`.
///
/// Equality on an index wins, in index order; then a range on an index;
/// otherwise a full scan.
pub(crate) fn plan_query(ast: Option<&QueryAst>, indexes: &[SortedIndex]) -> QueryPlan {
    let Some(ast) = ast else {
        return QueryPlan {
            access: AccessPath::FullScan,
            residual: None,
        };
    };
    let conjuncts = index_candidates(ast);
    let on = |index: &SortedIndex| -> Vec<&Comparison> {
        conjuncts
            .iter()
            .copied()
            .filter(|c| c.path == index.def.path && indexable(&c.literal))
            .collect()
    };

    for index in indexes {
        if let Some(eq) = on(index).into_iter().find(|c| c.op == ComparisonOp::Eq) {
            return QueryPlan {
                access: AccessPath::IndexEq {
                    index: index.def.name.clone(),
                    key: eq.literal.clone(),
                },
                residual: Some(ast.clone()),
            };
        }
    }

    for index in indexes {
        let ranges: Vec<_> = on(index).into_iter().filter(|c| c.op.is_range()).collect();
        let Some(first) = ranges.first() else { continue };
        let bound = |c: &Comparison| RangeBound {
            literal: c.literal.clone(),
            inclusive: matches!(c.op, ComparisonOp::Ge | ComparisonOp::Le),
        };
        let is_lower = |c: &Comparison| matches!(c.op, ComparisonOp::Gt | ComparisonOp::Ge);
        let same_kind =
            |c: &Comparison| matches!(c.literal, Literal::Num(_)) == matches!(first.literal, Literal::Num(_));

        let (mut lower, mut upper) = (None, None);
        if is_lower(first) {
            lower = Some(bound(first));
        } else {
            upper = Some(bound(first));
        }
        // A second bound may only narrow the scan when every document has at
        // most one value here; with arrays each conjunct can be met by a
        // different element.
        if !index.multi_valued() {
            for c in ranges.iter().skip(1).filter(|c| same_kind(c)) {
                if is_lower(c) && lower.is_none() {
                    lower = Some(bound(c));
                } else if !is_lower(c) && upper.is_none() {
                    upper = Some(bound(c));
                }
            }
        }
        return QueryPlan {
            access: AccessPath::IndexRange {
                index: index.def.name.clone(),
                lower,
                upper,
            },
            residual: Some(ast.clone()),
        };
    }

    QueryPlan {
        access: AccessPath::FullScan,
        residual: Some(ast.clone()),
    }
}
