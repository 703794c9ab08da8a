use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::eval::FieldValue;
use crate::query::FieldPath;

/// Single-key result ordering, written `path:asc` or `path:desc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortSpec {
    pub path: FieldPath,
    pub descending: bool,
}

impl Default for SortSpec {
    /// Newest commit first.
    fn default() -> Self {
        SortSpec {
            path: FieldPath::parse("commit.date").expect("valid path"),
            descending: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid sort {0:?}: expected path:asc or path:desc")]
pub struct SortParseError(pub String);

impl FromStr for SortSpec {
    type Err = SortParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SortParseError(s.to_owned());
        let (path, dir) = match s.rsplit_once(':') {
            Some((p, d)) => (p, d),
            None => (s, "asc"),
        };
        let descending = match dir {
            "asc" => false,
            "desc" => true,
            _ => return Err(err()),
        };
        let path = FieldPath::parse(path.trim()).ok_or_else(err)?;
        Ok(SortSpec { path, descending })
    }
}

impl fmt::Display for SortSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = if self.descending { "desc" } else { "asc" };
        write!(f, "{}:{dir}", self.path)
    }
}

fn rank(value: &FieldValue<'_>) -> u8 {
    match value {
        FieldValue::Null => 0,
        FieldValue::Bool(_) => 1,
        FieldValue::Num(_) => 2,
        FieldValue::Str(_) => 3,
        FieldValue::Array(_) => 4,
        FieldValue::Object(_) => 5,
        FieldValue::Missing => 6,
    }
}

/// Orders two sort keys in ascending direction. Values of different kinds
/// order null < bool < number < string < array < object.
pub(crate) fn compare_values(a: &FieldValue<'_>, b: &FieldValue<'_>) -> Ordering {
    match (a, b) {
        (FieldValue::Bool(x), FieldValue::Bool(y)) => x.cmp(y),
        (FieldValue::Num(x), FieldValue::Num(y)) => x.cmp(y),
        (FieldValue::Str(x), FieldValue::Str(y)) => x.cmp(y),
        _ => rank(a).cmp(&rank(b)),
    }
}

/// Full result ordering: documents lacking the key come last in either
/// direction, and ties fall back to ascending id.
pub(crate) fn compare_entries(
    spec: &SortSpec,
    (ka, ida): (&FieldValue<'_>, &str),
    (kb, idb): (&FieldValue<'_>, &str),
) -> Ordering {
    let by_key = match (ka.is_missing(), kb.is_missing()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => {
            let o = compare_values(ka, kb);
            if spec.descending {
                o.reverse()
            } else {
                o
            }
        }
    };
    by_key.then_with(|| ida.cmp(idb))
}
