//! Turning detector exports and commit history into case documents.
//!
//! The pipeline is: parse each detector's JSON into [`DetectorRecord`]s,
//! gather [`CommitRecord`]s for the commits they mention, then
//! [`convert`] both into validated [`RefactoringCase`]s that a job hands
//! to the store.
//!
//! [`RefactoringCase`]: crate::model::RefactoringCase

mod commits;
mod convert;
mod derive;
mod job;
mod refdiff;
mod rminer;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use commits::{
    commits_from_git, fetch_commit_records, parse_commits_jsonl, CommitRecord, CommitSource,
    CommitSourceError,
};
pub use convert::{convert, ConvertOutput};
pub use derive::{derive_extract_method_fields, derive_rename_fields, simple_name};
pub use job::{
    run_job, DetectorInput, IngestJob, JobCounts, JobHandle, JobRegistry, JobRequest, Stage,
    StageName, StageStatus,
};
pub use refdiff::{parse_refdiff_output, refdiff_type_name};
pub use rminer::{parse_rminer_output, simplify_method_signature};

pub const REFACTORING_MINER: &str = "RefactoringMiner";
pub const REFDIFF: &str = "RefDiff";

/// Where an element sits in the refactoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementRole {
    /// The element the refactoring starts from (before side).
    Source,
    /// The element the refactoring produces (after side).
    Target,
    /// Anything else the detector reports, such as moved statements.
    Context,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CodeElement {
    pub role: ElementRole,
    pub name: String,
    pub file: String,
    pub begin_line: Option<u64>,
    pub end_line: Option<u64>,
}

impl CodeElement {
    /// Inclusive line count, when the span is known.
    pub fn line_count(&self) -> Option<u64> {
        match (self.begin_line, self.end_line) {
            (Some(b), Some(e)) if b <= e => Some(e - b + 1),
            _ => None,
        }
    }
}

/// One refactoring as reported by a detector, before normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DetectorRecord {
    pub tool: String,
    pub commit_sha1: String,
    #[serde(rename = "type")]
    pub refactoring_type: String,
    pub description: String,
    pub left_elements: Vec<CodeElement>,
    pub right_elements: Vec<CodeElement>,
    pub raw: Value,
}

impl DetectorRecord {
    pub fn first_left(&self, role: ElementRole) -> Option<&CodeElement> {
        self.left_elements.iter().find(|e| e.role == role)
    }

    pub fn first_right(&self, role: ElementRole) -> Option<&CodeElement> {
        self.right_elements.iter().find(|e| e.role == role)
    }
}

/// A record (or detector entry) that could not be turned into a case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub locator: String,
    pub reason: String,
}

/// Output of a detector parser: good records plus per-entry rejections.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedRecords {
    pub records: Vec<DetectorRecord>,
    pub rejected: Vec<Rejection>,
}

impl ParsedRecords {
    /// Entries seen, accepted or not.
    pub fn seen(&self) -> usize {
        self.records.len() + self.rejected.len()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DetectorError {
    #[error("malformed detector JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unexpected detector output shape: {0}")]
    Shape(String),
    #[error("{0} has no commit sha1")]
    MissingSha1(String),
}

/// Parses the export of a named detector.
pub fn parse_detector_output(tool: &str, text: &str) -> Result<ParsedRecords, DetectorError> {
    match canonical_tool_name(tool) {
        Some(REFACTORING_MINER) => parse_rminer_output(text),
        Some(REFDIFF) => parse_refdiff_output(text),
        _ => Err(DetectorError::Shape(format!("unknown detector {tool:?}"))),
    }
}

/// Accepts common spellings of the supported detectors.
pub fn canonical_tool_name(name: &str) -> Option<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "refactoringminer" | "rminer" | "refactoring-miner" => Some(REFACTORING_MINER),
        "refdiff" => Some(REFDIFF),
        _ => None,
    }
}
