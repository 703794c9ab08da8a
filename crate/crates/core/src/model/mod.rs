//! The unified refactoring-case document and its JSON encoding.
//!
//! Wire field names are the dotted property paths realized as nested
//! objects, so `commit.size.files.changed` is
//! `{"commit":{"size":{"files":{"changed":2}}}}`. Keys the model does not
//! know are kept in `extra` maps and written back unchanged.

mod id;
pub(crate) mod validate;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub use id::case_id;
pub use validate::{validate_case, Violation};

/// One detected refactoring together with the commit it was found in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefactoringCase {
    #[serde(default)]
    pub id: String,
    #[serde(rename = "type")]
    pub refactoring_type: String,
    #[serde(default)]
    pub description: String,
    pub repository: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub before: Option<CodeFragmentRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after: Option<CodeFragmentRef>,
    pub commit: CommitMeta,
    #[serde(
        rename = "extractMethod",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub extract_method: Option<ExtractMethodInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rename: Option<RenameInfo>,
    pub meta: CaseMeta,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseMeta {
    pub tool: String,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl CaseMeta {
    pub fn new(tool: impl Into<String>) -> Self {
        CaseMeta {
            tool: tool.into(),
            extra: Map::new(),
        }
    }
}

/// A named code element on one side of a refactoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeFragmentRef {
    pub name: String,
    pub location: Location,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub file: String,
    pub lines: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub begin: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<u64>,
}

impl Location {
    /// Location spanning `begin..=end`.
    pub fn span(file: impl Into<String>, begin: u64, end: u64) -> Self {
        Location {
            file: file.into(),
            lines: (end + 1).saturating_sub(begin),
            begin: Some(begin),
            end: Some(end),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CommitMeta {
    pub sha1: String,
    /// ISO-8601 UTC, `YYYY-MM-DDTHH:MM:SSZ`.
    pub date: String,
    #[serde(default)]
    pub message: String,
    #[serde(default)]
    pub author_name: String,
    pub size: CommitSize,
    pub refactorings: RefactoringTotals,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitSize {
    pub files: FileCounts,
    pub lines: LineCounts,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileCounts {
    pub changed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCounts {
    pub inserted: u64,
    pub deleted: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefactoringTotals {
    pub total: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtractMethodInfo {
    pub source_methods_count: u64,
    pub source_method_lines: u64,
    pub extracted_lines: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenameInfo {
    pub from: String,
    pub to: String,
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("expected a JSON object")]
    NotAnObject,
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

/// Encodes a case as its nested JSON document.
pub fn to_json(case: &RefactoringCase) -> Value {
    serde_json::to_value(case).expect("case serialization is infallible")
}

/// Decodes a case. A missing `id` is filled in with [`case_id`].
pub fn from_json(value: &Value) -> Result<RefactoringCase, ModelError> {
    if !value.is_object() {
        return Err(ModelError::NotAnObject);
    }
    let mut case: RefactoringCase =
        serde_path_to_error::deserialize(value).map_err(|err| ModelError::Field {
            path: err.path().to_string(),
            message: err.inner().to_string(),
        })?;
    if case.id.is_empty() {
        case.id = case_id(&case);
    }
    Ok(case)
}

/// Strips a trailing `/` and `.git` from a repository URL.
pub fn normalize_repository_url(url: &str) -> String {
    let mut url = url.trim();
    loop {
        let before = url;
        url = url.trim_end_matches('/');
        url = url.strip_suffix(".git").unwrap_or(url);
        if url == before {
            return url.to_owned();
        }
    }
}

/// Link to the commit page when the repository lives on a known forge.
pub fn commit_url(case: &RefactoringCase) -> Option<String> {
    const FORGES: [&str; 4] = [
        "https://github.com/",
        "https://gitlab.com/",
        "https://bitbucket.org/",
        "https://codeberg.org/",
    ];
    let repo = &case.repository;
    let known = FORGES
        .iter()
        .any(|f| repo.starts_with(f) && repo[f.len()..].split('/').filter(|s| !s.is_empty()).count() >= 2);
    if !known || case.commit.sha1.is_empty() {
        return None;
    }
    let sep = if repo.starts_with("https://gitlab.com/") { "/-/commit/" } else { "/commit/" };
    Some(format!("{repo}{sep}{}", case.commit.sha1))
}
