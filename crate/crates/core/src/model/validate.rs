use std::fmt;

use chrono::DateTime;
use serde::Serialize;

use super::{case_id, normalize_repository_url, CodeFragmentRef, RefactoringCase};

/// One broken invariant, addressed by its dotted path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Checks every invariant of the case model and reports all violations.
pub fn validate_case(case: &RefactoringCase) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut non_empty = |path: &str, value: &str| {
        if value.trim().is_empty() {
            out.push(Violation::new(path, format!("{path} must not be empty")));
        }
    };
    non_empty("type", &case.refactoring_type);
    non_empty("repository", &case.repository);
    non_empty("commit.sha1", &case.commit.sha1);
    non_empty("meta.tool", &case.meta.tool);

    if !case.repository.is_empty() && normalize_repository_url(&case.repository) != case.repository {
        out.push(Violation::new(
            "repository",
            "repository must not end with '/' or '.git'",
        ));
    }
    if !is_sha1(&case.commit.sha1) {
        out.push(Violation::new(
            "commit.sha1",
            "commit.sha1 must be 40 hex chars",
        ));
    }
    if !is_utc_timestamp(&case.commit.date) {
        out.push(Violation::new(
            "commit.date",
            format!("commit.date {:?} is not an ISO-8601 UTC timestamp", case.commit.date),
        ));
    }
    if case.commit.refactorings.total < 1 {
        out.push(Violation::new(
            "commit.refactorings.total",
            "commit.refactorings.total must be at least 1",
        ));
    }
    if let Some(em) = &case.extract_method {
        if em.source_methods_count < 1 {
            out.push(Violation::new(
                "extractMethod.sourceMethodsCount",
                "extractMethod.sourceMethodsCount must be at least 1",
            ));
        }
    }
    if let Some(rename) = &case.rename {
        for (path, name) in [("rename.from", &rename.from), ("rename.to", &rename.to)] {
            if name.is_empty() {
                out.push(Violation::new(path, format!("{path} must not be empty")));
            } else if name.contains('(') {
                out.push(Violation::new(
                    path,
                    format!("{path} must be a simple name without a parameter list"),
                ));
            }
        }
    }
    check_fragment("before", case.before.as_ref(), &mut out);
    check_fragment("after", case.after.as_ref(), &mut out);

    let expected = case_id(case);
    if case.id != expected {
        out.push(Violation::new(
            "id",
            format!("id {:?} does not match content hash {expected}", case.id),
        ));
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn check_fragment(side: &str, fragment: Option<&CodeFragmentRef>, out: &mut Vec<Violation>) {
    let Some(fragment) = fragment else { return };
    let loc = &fragment.location;
    match (loc.begin, loc.end) {
        (Some(begin), Some(end)) => {
            if begin == 0 {
                out.push(Violation::new(
                    format!("{side}.location.begin"),
                    format!("{side}.location.begin is 1-based"),
                ));
            }
            if begin > end {
                out.push(Violation::new(
                    format!("{side}.location"),
                    format!("{side}.location.begin {begin} is after end {end}"),
                ));
            } else if loc.lines != end - begin + 1 {
                out.push(Violation::new(
                    format!("{side}.location.lines"),
                    format!(
                        "{side}.location.lines is {} but the span {begin}..{end} has {}",
                        loc.lines,
                        end - begin + 1
                    ),
                ));
            }
        }
        (None, None) => {}
        _ => out.push(Violation::new(
            format!("{side}.location"),
            format!("{side}.location needs both begin and end or neither"),
        )),
    }
}

/// `YYYY-MM-DDTHH:MM:SSZ`, the one shape that orders correctly as text.
pub(crate) fn is_utc_timestamp(text: &str) -> bool {
    text.len() == 20 && text.ends_with('Z') && DateTime::parse_from_rfc3339(text).is_ok()
}

pub(crate) fn is_sha1(text: &str) -> bool {
    text.len() == 40 && text.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
}
