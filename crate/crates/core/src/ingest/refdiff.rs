use serde_json::Value;

use super::{
    CodeElement, DetectorError, DetectorRecord, ElementRole, ParsedRecords, Rejection, REFDIFF,
};

/// Relationship kind and node kind to the shared type vocabulary.
const TYPE_TABLE: &[(&str, &str, &str)] = &[
    ("EXTRACT", "Method", "Extract Method"),
    ("EXTRACT_MOVE", "Method", "Extract And Move Method"),
    ("INLINE", "Method", "Inline Method"),
    ("RENAME", "Method", "Rename Method"),
    ("RENAME", "Class", "Rename Class"),
    ("RENAME", "Interface", "Rename Interface"),
    ("RENAME", "Enum", "Rename Class"),
    ("MOVE", "Method", "Move Method"),
    ("MOVE", "Class", "Move Class"),
    ("MOVE", "Interface", "Move Class"),
    ("MOVE_RENAME", "Method", "Move And Rename Method"),
    ("MOVE_RENAME", "Class", "Move And Rename Class"),
    ("PULL_UP", "Method", "Pull Up Method"),
    ("PUSH_DOWN", "Method", "Push Down Method"),
    ("EXTRACT_SUPER", "Class", "Extract Superclass"),
    ("EXTRACT_SUPER", "Interface", "Extract Interface"),
    ("CHANGE_SIGNATURE", "Method", "Change Method Signature"),
];

/// Maps a RefDiff relationship to a refactoring type name. Unknown
/// combinations keep the relationship name.
pub fn refdiff_type_name(relationship: &str, node_type: &str) -> String {
    TYPE_TABLE
        .iter()
        .find(|(rel, node, _)| *rel == relationship && node.eq_ignore_ascii_case(node_type))
        .map(|(_, _, name)| (*name).to_owned())
        .unwrap_or_else(|| relationship.to_owned())
}

/// Parses a RefDiff relationship export: either an array of relationships
/// or `{"relationships": [...]}`, each shaped
/// `{"commit", "type", "nodeBefore": {"type", "name", "file", "beginLine",
/// "endLine"}, "nodeAfter": {...}}`.
pub fn parse_refdiff_output(text: &str) -> Result<ParsedRecords, DetectorError> {
    let root: Value = serde_json::from_str(text)?;
    let relationships = match &root {
        Value::Array(items) => items,
        Value::Object(map) => map
            .get("relationships")
            .and_then(Value::as_array)
            .ok_or_else(|| DetectorError::Shape("expected a \"relationships\" array".into()))?,
        _ => return Err(DetectorError::Shape("expected an array of relationships".into())),
    };

    let mut out = ParsedRecords::default();
    for (i, rel) in relationships.iter().enumerate() {
        let locator = format!("relationships[{i}]");
        let sha1 = rel
            .get("commit")
            .or_else(|| rel.get("sha1"))
            .and_then(Value::as_str)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| DetectorError::MissingSha1(locator.clone()))?;
        let Some(kind) = rel.get("type").and_then(Value::as_str).filter(|s| !s.is_empty()) else {
            out.rejected.push(Rejection {
                locator,
                reason: "relationship has no type".into(),
            });
            continue;
        };
        let before = rel.get("nodeBefore").map(|n| node(n, ElementRole::Source));
        let after = rel.get("nodeAfter").map(|n| node(n, ElementRole::Target));
        let node_type = rel
            .get("nodeBefore")
            .or_else(|| rel.get("nodeAfter"))
            .and_then(|n| n.get("type"))
            .and_then(Value::as_str)
            .unwrap_or_default();
        let refactoring_type = refdiff_type_name(kind, node_type);
        let description = match rel.get("description").and_then(Value::as_str) {
            Some(d) => d.to_owned(),
            None => describe(kind, node_type, before.as_ref(), after.as_ref()),
        };
        if before.is_none() && after.is_none() && description.is_empty() {
            out.rejected.push(Rejection {
                locator,
                reason: "relationship has neither nodes nor description".into(),
            });
            continue;
        }
        out.records.push(DetectorRecord {
            tool: REFDIFF.to_owned(),
            commit_sha1: sha1.to_owned(),
            refactoring_type,
            description,
            left_elements: before.into_iter().collect(),
            right_elements: after.into_iter().collect(),
            raw: rel.clone(),
        });
    }
    Ok(out)
}

fn node(value: &Value, role: ElementRole) -> CodeElement {
    let text = |k: &str| value.get(k).and_then(Value::as_str).unwrap_or_default().to_owned();
    CodeElement {
        role,
        name: text("name"),
        file: text("file"),
        begin_line: value.get("beginLine").and_then(Value::as_u64),
        end_line: value.get("endLine").and_then(Value::as_u64),
    }
}

fn describe(
    kind: &str,
    node_type: &str,
    before: Option<&CodeElement>,
    after: Option<&CodeElement>,
) -> String {
    let b = before.map_or("?", |e| e.name.as_str());
    let a = after.map_or("?", |e| e.name.as_str());
    let noun = node_type.to_ascii_lowercase();
    match kind {
        "EXTRACT" | "EXTRACT_MOVE" => format!("Extracted {noun} {a} from {b}"),
        "INLINE" => format!("Inlined {noun} {b} into {a}"),
        "RENAME" => format!("Renamed {noun} {b} to {a}"),
        "MOVE" | "MOVE_RENAME" | "PULL_UP" | "PUSH_DOWN" => format!("Moved {noun} {b} to {a}"),
        _ => format!("{kind} {noun} {b} to {a}"),
    }
}
