use std::collections::{BTreeMap, HashMap, HashSet};

use serde_json::Map;

use super::{
    derive_extract_method_fields, derive_rename_fields, CodeElement, CommitRecord, DetectorRecord,
    ElementRole, Rejection,
};
use crate::model::{
    case_id, normalize_repository_url, validate_case, CaseMeta, CodeFragmentRef, CommitMeta,
    CommitSize, FileCounts, LineCounts, Location, RefactoringCase, RefactoringTotals,
};

#[derive(Debug, Clone, Default)]
pub struct ConvertOutput {
    pub cases: Vec<RefactoringCase>,
    pub rejected: Vec<Rejection>,
    /// Records whose case id repeated an earlier record in the same input.
    pub duplicates: usize,
}

/// Builds validated cases from detector records.
///
/// Records are deduplicated by case id, and `commit.refactorings.total`
/// counts the surviving cases that share a commit and detector.
pub fn convert(
    records: &[DetectorRecord],
    commits: &BTreeMap<String, CommitRecord>,
    repository_url: &str,
) -> ConvertOutput {
    let repository = normalize_repository_url(repository_url);
    let mut out = ConvertOutput::default();
    let mut seen = HashSet::new();

    for (i, record) in records.iter().enumerate() {
        let locator = format!("{}#{i}", record.tool);
        let Some(commit) = commits.get(&record.commit_sha1) else {
            out.rejected.push(Rejection {
                locator,
                reason: format!("no commit metadata for {}", record.commit_sha1),
            });
            continue;
        };
        let mut case = RefactoringCase {
            id: String::new(),
            refactoring_type: record.refactoring_type.clone(),
            description: record.description.clone(),
            repository: repository.clone(),
            before: record.first_left(ElementRole::Source).map(fragment),
            after: record.first_right(ElementRole::Target).map(fragment),
            commit: CommitMeta {
                sha1: commit.sha1.clone(),
                date: commit.date.clone(),
                message: commit.message.clone(),
                author_name: commit.author_name.clone(),
                size: CommitSize {
                    files: FileCounts {
                        changed: commit.files_changed,
                    },
                    lines: LineCounts {
                        inserted: commit.lines_inserted,
                        deleted: commit.lines_deleted,
                    },
                },
                refactorings: RefactoringTotals { total: 1 },
                extra: Map::new(),
            },
            extract_method: derive_extract_method_fields(record),
            rename: derive_rename_fields(record),
            meta: CaseMeta::new(record.tool.clone()),
            extra: Map::new(),
        };
        case.id = case_id(&case);
        if let Err(violations) = validate_case(&case) {
            let reasons: Vec<_> = violations.iter().map(|v| v.message.as_str()).collect();
            out.rejected.push(Rejection {
                locator,
                reason: reasons.join("; "),
            });
            continue;
        }
        if !seen.insert(case.id.clone()) {
            out.duplicates += 1;
            continue;
        }
        out.cases.push(case);
    }

    let mut totals: HashMap<(String, String), u64> = HashMap::new();
    for case in &out.cases {
        *totals
            .entry((case.commit.sha1.clone(), case.meta.tool.clone()))
            .or_default() += 1;
    }
    for case in &mut out.cases {
        case.commit.refactorings.total = totals[&(case.commit.sha1.clone(), case.meta.tool.clone())];
    }
    out
}

fn fragment(element: &CodeElement) -> CodeFragmentRef {
    let location = match (element.begin_line, element.end_line) {
        (Some(b), Some(e)) => Location::span(element.file.clone(), b, e),
        _ => Location {
            file: element.file.clone(),
            lines: 0,
            begin: None,
            end: None,
        },
    };
    CodeFragmentRef {
        name: element.name.clone(),
        location,
        extra: Map::new(),
    }
}
