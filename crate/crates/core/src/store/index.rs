use std::collections::BTreeMap;
use std::ops::Bound;

use rust_decimal::Decimal;
use serde::Serialize;
use serde_json::Value;

use crate::eval::{resolve_path, FieldValue};
use crate::query::{FieldPath, Literal};

/// A sorted secondary index over one path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexDef {
    pub name: String,
    pub path: FieldPath,
}

impl IndexDef {
    pub fn new(path: &str) -> Self {
        IndexDef {
            name: path.to_owned(),
            path: FieldPath::parse(path).expect("index paths are valid"),
        }
    }
}

/// Index keys: numbers order numerically and sort before all strings,
/// which order bytewise. Other JSON values are not indexed because no
/// equality or range comparison can match them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum IndexKey {
    Num(Decimal),
    Str(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IndexStats {
    pub entries: usize,
    pub distinct_keys: usize,
    pub multi_valued: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct SortedIndex {
    pub(crate) def: IndexDef,
    entries: BTreeMap<IndexKey, Vec<u32>>,
    entry_count: usize,
    /// Set once any document holds an array at the indexed path. Combining
    /// two bounds into one range scan is only sound while this is false.
    multi_valued: bool,
}

impl SortedIndex {
    pub(crate) fn new(def: IndexDef) -> Self {
        SortedIndex {
            def,
            entries: BTreeMap::new(),
            entry_count: 0,
            multi_valued: false,
        }
    }

    pub(crate) fn insert(&mut self, position: u32, doc: &Value) {
        let value = resolve_path(doc, &self.def.path);
        if matches!(value, FieldValue::Array(_)) {
            self.multi_valued = true;
        }
        let mut keys = Vec::new();
        collect_keys(&value, &mut keys);
        keys.sort();
        keys.dedup();
        for key in keys {
            self.entries.entry(key).or_default().push(position);
            self.entry_count += 1;
        }
    }

    pub(crate) fn multi_valued(&self) -> bool {
        self.multi_valued
    }

    pub(crate) fn stats(&self) -> IndexStats {
        IndexStats {
            entries: self.entry_count,
            distinct_keys: self.entries.len(),
            multi_valued: self.multi_valued,
        }
    }

    /// Positions of documents that may satisfy `path = literal`.
    pub(crate) fn lookup_eq(&self, literal: &Literal) -> Vec<u32> {
        let mut out = Vec::new();
        let mut take = |key: IndexKey| {
            if let Some(list) = self.entries.get(&key) {
                out.extend_from_slice(list);
            }
        };
        match literal {
            Literal::Str(s) => take(IndexKey::Str(s.clone())),
            Literal::Num(n) => {
                take(IndexKey::Num(n.value()));
                take(IndexKey::Str(n.lexeme().to_owned()));
            }
            Literal::Regex(_) => {}
        }
        normalize(out)
    }

    /// Positions of documents with a key of the literal's kind inside the
    /// bounds.
    pub(crate) fn lookup_range(
        &self,
        lower: Option<(&Literal, bool)>,
        upper: Option<(&Literal, bool)>,
    ) -> Vec<u32> {
        let kind_of = |b: Option<(&Literal, bool)>| b.and_then(|(l, _)| key_of(l));
        let Some(sample) = kind_of(lower).or_else(|| kind_of(upper)) else {
            return Vec::new();
        };
        let numeric = matches!(sample, IndexKey::Num(_));
        let (kind_start, kind_end) = if numeric {
            (Bound::Unbounded, Bound::Excluded(IndexKey::Str(String::new())))
        } else {
            (Bound::Included(IndexKey::Str(String::new())), Bound::Unbounded)
        };
        let to_bound = |b: Option<(&Literal, bool)>, default: Bound<IndexKey>| match b {
            Some((lit, inclusive)) => match key_of(lit) {
                Some(k) if matches!(k, IndexKey::Num(_)) == numeric => {
                    if inclusive {
                        Bound::Included(k)
                    } else {
                        Bound::Excluded(k)
                    }
                }
                _ => default,
            },
            None => default,
        };
        let start = to_bound(lower, kind_start);
        let end = to_bound(upper, kind_end);
        if range_is_empty(&start, &end) {
            return Vec::new();
        }
        let mut out = Vec::new();
        for list in self.entries.range((start, end)).map(|(_, v)| v) {
            out.extend_from_slice(list);
        }
        normalize(out)
    }

    #[cfg(test)]
    pub(crate) fn positions_for(&self, key: &IndexKey) -> Option<&[u32]> {
        self.entries.get(key).map(Vec::as_slice)
    }
}

fn range_is_empty(start: &Bound<IndexKey>, end: &Bound<IndexKey>) -> bool {
    match (start, end) {
        (Bound::Included(s), Bound::Included(e)) => s > e,
        (Bound::Included(s) | Bound::Excluded(s), Bound::Excluded(e))
        | (Bound::Excluded(s), Bound::Included(e)) => s >= e,
        _ => false,
    }
}

fn key_of(literal: &Literal) -> Option<IndexKey> {
    match literal {
        Literal::Str(s) => Some(IndexKey::Str(s.clone())),
        Literal::Num(n) => Some(IndexKey::Num(n.value())),
        Literal::Regex(_) => None,
    }
}

fn collect_keys(value: &FieldValue<'_>, out: &mut Vec<IndexKey>) {
    match value {
        FieldValue::Num(n) => out.push(IndexKey::Num(*n)),
        FieldValue::Str(s) => out.push(IndexKey::Str((*s).to_owned())),
        FieldValue::Array(items) => items.iter().for_each(|v| collect_keys(v, out)),
        _ => {}
    }
}

fn normalize(mut positions: Vec<u32>) -> Vec<u32> {
    positions.sort_unstable();
    positions.dedup();
    positions
}
