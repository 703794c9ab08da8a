use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::model::validate::is_sha1;

/// Commit-level metadata joined onto every case from that commit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CommitRecord {
    pub sha1: String,
    pub date: String,
    #[serde(default)]
    pub message: String,
    #[serde(default)]
    pub author_name: String,
    #[serde(default)]
    pub files_changed: u64,
    #[serde(default)]
    pub lines_inserted: u64,
    #[serde(default)]
    pub lines_deleted: u64,
}

/// Where commit metadata comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CommitSource {
    /// A JSONL file of [`CommitRecord`]s.
    Jsonl { path: PathBuf },
    /// A local clone read with `git log`.
    Clone { path: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum CommitSourceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("git failed: {0}")]
    Git(String),
    #[error("commit metadata missing for {}", .0.join(", "))]
    Missing(Vec<String>),
}

/// Loads commit metadata and checks that every `referenced` commit is
/// present. The result is restricted to the referenced commits.
pub fn fetch_commit_records(
    source: &CommitSource,
    referenced: &BTreeSet<String>,
) -> Result<BTreeMap<String, CommitRecord>, CommitSourceError> {
    let all = match source {
        CommitSource::Jsonl { path } => {
            let text = std::fs::read_to_string(path).map_err(|source| CommitSourceError::Io {
                path: path.clone(),
                source,
            })?;
            parse_commits_jsonl(&text)?
        }
        CommitSource::Clone { path } => commits_from_git(path)?,
    };
    let mut by_sha: BTreeMap<String, CommitRecord> =
        all.into_iter().map(|c| (c.sha1.clone(), c)).collect();
    let missing: Vec<String> = referenced
        .iter()
        .filter(|sha| !by_sha.contains_key(*sha))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(CommitSourceError::Missing(missing));
    }
    by_sha.retain(|sha, _| referenced.contains(sha));
    Ok(by_sha)
}

/// One [`CommitRecord`] per non-blank line. Dates are normalized to UTC.
pub fn parse_commits_jsonl(text: &str) -> Result<Vec<CommitRecord>, CommitSourceError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = i + 1;
        let bad = |message: String| CommitSourceError::Line {
            line: line_no,
            message,
        };
        let mut record: CommitRecord =
            serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        if !is_sha1(&record.sha1) {
            return Err(bad(format!("sha1 {:?} is not 40 hex chars", record.sha1)));
        }
        record.date = normalize_date(&record.date)
            .ok_or_else(|| bad(format!("date {:?} is not ISO-8601", record.date)))?;
        out.push(record);
    }
    Ok(out)
}

/// Any RFC 3339 timestamp as `YYYY-MM-DDTHH:MM:SSZ` in UTC.
pub(crate) fn normalize_date(text: &str) -> Option<String> {
    let parsed = DateTime::parse_from_rfc3339(text.trim()).ok()?;
    Some(
        parsed
            .with_timezone(&Utc)
            .to_rfc3339_opts(SecondsFormat::Secs, true),
    )
}

const RECORD_START: char = '\u{0}';
const FIELD_SEP: char = '\u{1f}';
const HEADER_END: char = '\u{1e}';

/// Reads every commit reachable from any ref of a local clone.
///
/// Sizes follow `git diff --shortstat` with rename detection off; merge
/// commits are measured against their first parent.
pub fn commits_from_git(repo: &Path) -> Result<Vec<CommitRecord>, CommitSourceError> {
    let output = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args([
            "log",
            "--all",
            "--no-renames",
            "--diff-merges=first-parent",
            "--shortstat",
            "--date=format-local:%Y-%m-%dT%H:%M:%SZ",
            "--format=%x00%H%x1f%ad%x1f%an%x1f%B%x1e",
        ])
        .env("TZ", "UTC")
        .output()
        .map_err(|e| CommitSourceError::Git(e.to_string()))?;
    if !output.status.success() {
        return Err(CommitSourceError::Git(
            String::from_utf8_lossy(&output.stderr).trim().to_owned(),
        ));
    }
    let text = String::from_utf8_lossy(&output.stdout);
    text.split(RECORD_START)
        .filter(|chunk| !chunk.trim().is_empty())
        .map(parse_log_chunk)
        .collect()
}

fn parse_log_chunk(chunk: &str) -> Result<CommitRecord, CommitSourceError> {
    let malformed = || CommitSourceError::Git(format!("unexpected log output: {chunk:?}"));
    let (header, stat) = chunk.split_once(HEADER_END).ok_or_else(malformed)?;
    let mut fields = header.splitn(4, FIELD_SEP);
    let sha1 = fields.next().ok_or_else(malformed)?.to_owned();
    let date = fields.next().ok_or_else(malformed)?.to_owned();
    let author_name = fields.next().ok_or_else(malformed)?.to_owned();
    let message = fields.next().ok_or_else(malformed)?.trim_end().to_owned();
    let (files_changed, lines_inserted, lines_deleted) = parse_shortstat(stat);
    Ok(CommitRecord {
        sha1,
        date,
        message,
        author_name,
        files_changed,
        lines_inserted,
        lines_deleted,
    })
}

/// Parses ` 2 files changed, 171 insertions(+), 175 deletions(-)`; absent
/// parts count as zero.
pub(crate) fn parse_shortstat(text: &str) -> (u64, u64, u64) {
    let mut counts = (0, 0, 0);
    for part in text.trim().split(',') {
        let mut words = part.split_whitespace();
        let (Some(n), Some(what)) = (words.next(), words.next()) else {
            continue;
        };
        let Ok(n) = n.parse::<u64>() else { continue };
        if what.starts_with("file") {
            counts.0 = n;
        } else if what.starts_with("insertion") {
            counts.1 = n;
        } else if what.starts_with("deletion") {
            counts.2 = n;
        }
    }
    counts
}
