use std::str::FromStr;

use rust_decimal::Decimal;
use serde_json::{Map, Number, Value};

use crate::query::FieldPath;

/// A value read out of a document, borrowing from it where possible.
///
/// Mirrors the JSON data model, plus `Missing` for keys that are absent
/// (as opposed to present with `null`).
#[derive(Debug, Clone, PartialEq)]
pub enum FieldValue<'a> {
    Missing,
    Null,
    Bool(bool),
    Num(Decimal),
    Str(&'a str),
    Array(Vec<FieldValue<'a>>),
    Object(&'a Map<String, Value>),
}

impl<'a> FieldValue<'a> {
    pub fn from_json(value: &'a Value) -> Self {
        match value {
            Value::Null => FieldValue::Null,
            Value::Bool(b) => FieldValue::Bool(*b),
            Value::Number(n) => number_to_decimal(n).map_or(FieldValue::Null, FieldValue::Num),
            Value::String(s) => FieldValue::Str(s),
            Value::Array(items) => FieldValue::Array(items.iter().map(FieldValue::from_json).collect()),
            Value::Object(map) => FieldValue::Object(map),
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, FieldValue::Missing)
    }
}

/// Exact decimal for integers; floats go through their shortest
/// round-trip text so `0.1` stays `0.1`. Values outside decimal range
/// yield `None`.
pub fn number_to_decimal(n: &Number) -> Option<Decimal> {
    if let Some(i) = n.as_i64() {
        return Some(Decimal::from(i));
    }
    if let Some(u) = n.as_u64() {
        return Some(Decimal::from(u));
    }
    let f = n.as_f64()?;
    if !f.is_finite() {
        return None;
    }
    Decimal::from_str(&f.to_string()).ok()
}

/// Looks up a dotted path.
///
/// Arrays met on the way are mapped over: the rest of the path is applied
/// to every element, misses are dropped, and an empty result is `Missing`.
pub fn resolve_path<'a>(doc: &'a Value, path: &FieldPath) -> FieldValue<'a> {
    resolve_segments(doc, path.segments())
}

fn resolve_segments<'a>(value: &'a Value, segments: &[String]) -> FieldValue<'a> {
    let Some((head, rest)) = segments.split_first() else {
        return match value {
            Value::Array(items) if items.is_empty() => FieldValue::Missing,
            _ => FieldValue::from_json(value),
        };
    };
    match value {
        Value::Object(map) => match map.get(head.as_str()) {
            Some(child) => resolve_segments(child, rest),
            None => FieldValue::Missing,
        },
        Value::Array(items) => {
            let found: Vec<_> = items
                .iter()
                .map(|item| resolve_segments(item, segments))
                .filter(|v| !v.is_missing())
                .collect();
            if found.is_empty() {
                FieldValue::Missing
            } else {
                FieldValue::Array(found)
            }
        }
        _ => FieldValue::Missing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn path(p: &str) -> FieldPath {
        FieldPath::parse(p).unwrap()
    }

    #[test]
    fn nested_lookup() {
        let doc = json!({"extractMethod": {"sourceMethodLines": 167}});
        assert_eq!(
            resolve_path(&doc, &path("extractMethod.sourceMethodLines")),
            FieldValue::Num(Decimal::from(167))
        );
    }

    #[test]
    fn absent_key_is_missing() {
        let doc = json!({"no": {"such": 1}});
        assert_eq!(resolve_path(&doc, &path("no.such.key")), FieldValue::Missing);
        assert_eq!(resolve_path(&doc, &path("other")), FieldValue::Missing);
    }

    #[test]
    fn null_is_not_missing() {
        let doc = json!({"a": null});
        assert_eq!(resolve_path(&doc, &path("a")), FieldValue::Null);
    }

    #[test]
    fn arrays_map_and_drop_misses() {
        let doc = json!({"a": [{"b": 1}, {"b": 2}, {"c": 3}]});
        assert_eq!(
            resolve_path(&doc, &path("a.b")),
            FieldValue::Array(vec![
                FieldValue::Num(Decimal::from(1)),
                FieldValue::Num(Decimal::from(2))
            ])
        );
        assert_eq!(resolve_path(&doc, &path("a.z")), FieldValue::Missing);
        let doc = json!({"a": []});
        assert_eq!(resolve_path(&doc, &path("a")), FieldValue::Missing);
    }

    #[test]
    fn float_numbers_keep_their_decimal_text() {
        let doc = json!({"x": 0.1, "big": 1e300});
        assert_eq!(
            resolve_path(&doc, &path("x")),
            FieldValue::Num(Decimal::from_str("0.1").unwrap())
        );
        assert_eq!(resolve_path(&doc, &path("big")), FieldValue::Null);
    }
}
