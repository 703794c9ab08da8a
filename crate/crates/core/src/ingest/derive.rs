use std::collections::BTreeSet;

use super::{DetectorRecord, ElementRole};
use crate::model::{ExtractMethodInfo, RenameInfo};

const EXTRACT_METHOD_TYPES: [&str; 2] = ["Extract Method", "Extract And Move Method"];

/// Extract Method counters: distinct source methods, the largest source
/// method's line count, and the extracted method's line count.
///
/// `None` for other refactoring types or when the needed spans are absent.
pub fn derive_extract_method_fields(record: &DetectorRecord) -> Option<ExtractMethodInfo> {
    if !EXTRACT_METHOD_TYPES.contains(&record.refactoring_type.as_str()) {
        return None;
    }
    let sources: Vec<_> = record
        .left_elements
        .iter()
        .filter(|e| e.role == ElementRole::Source)
        .collect();
    let source_method_lines = sources.iter().filter_map(|e| e.line_count()).max()?;
    let extracted_lines = record.first_right(ElementRole::Target)?.line_count()?;
    let distinct: BTreeSet<(&str, &str)> = sources
        .iter()
        .map(|e| (e.file.as_str(), e.name.as_str()))
        .collect();
    Some(ExtractMethodInfo {
        source_methods_count: distinct.len() as u64,
        source_method_lines,
        extracted_lines,
    })
}

/// Simple names on both sides of a rename.
pub fn derive_rename_fields(record: &DetectorRecord) -> Option<RenameInfo> {
    if !record.refactoring_type.starts_with("Rename") {
        return None;
    }
    let from = simple_name(&record.first_left(ElementRole::Source)?.name);
    let to = simple_name(&record.first_right(ElementRole::Target)?.name);
    if from.is_empty() || to.is_empty() {
        return None;
    }
    Some(RenameInfo { from, to })
}

/// Bare identifier of an element name: the parameter list is cut at the
/// first `(`, a ` : Type` suffix and leading modifiers are dropped, and
/// package or class qualifiers are removed.
pub fn simple_name(name: &str) -> String {
    let head = name.split('(').next().unwrap_or_default();
    let head = head.split(" : ").next().unwrap_or_default();
    let head = head.split_whitespace().last().unwrap_or_default();
    head.rsplit(['.', '#']).next().unwrap_or_default().to_owned()
}
