//! Deterministic synthetic corpus for load testing.
//!
//! Cases are spread over a dozen refactoring types, ten repositories and
//! ten years of commit dates. A share of renames go from `get*` to
//! `retrieve*`, and some commit messages mention extraction, so every
//! example query has something to find.

use chrono::{DateTime, Duration, SecondsFormat};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Map;

use crate::model::{
    case_id, CaseMeta, CodeFragmentRef, CommitMeta, CommitSize, ExtractMethodInfo, FileCounts,
    LineCounts, Location, RefactoringCase, RefactoringTotals, RenameInfo,
};

/// Types with rough relative weights.
const TYPES: [(&str, u32); 12] = [
    ("Extract Method", 14),
    ("Rename Method", 12),
    ("Move Method", 10),
    ("Rename Class", 8),
    ("Inline Method", 8),
    ("Move Class", 8),
    ("Extract And Move Method", 6),
    ("Pull Up Method", 6),
    ("Push Down Method", 6),
    ("Extract Superclass", 4),
    ("Extract Interface", 4),
    ("Change Method Signature", 14),
];

const REPOSITORIES: [&str; 10] = [
    "https://github.com/gradle/gradle",
    "https://github.com/apache/commons-lang",
    "https://github.com/square/okhttp",
    "https://github.com/google/guava",
    "https://github.com/spring-projects/spring-framework",
    "https://github.com/elastic/elasticsearch",
    "https://github.com/junit-team/junit5",
    "https://github.com/apache/kafka",
    "https://github.com/jenkinsci/jenkins",
    "https://github.com/eclipse/jetty.project",
];

const PREFIXES: [&str; 8] = ["get", "set", "load", "compute", "create", "find", "build", "is"];
const NOUNS: [&str; 12] = [
    "Loader", "Name", "Value", "Config", "Instance", "Item", "Path", "Cache", "Factory", "Task",
    "Handler", "Model",
];
const MESSAGES: [&str; 10] = [
    "Polish {}",
    "Extract helper from {}",
    "Refactor {} for readability",
    "Fix flaky test in {}",
    "Rename accessors in {}",
    "extract common code of {}",
    "Merge branch 'release' into master",
    "Simplify {}",
    "Move {} to internal package",
    "Clean up {}",
];
const TOOLS: [&str; 2] = ["RefDiff", "RefactoringMiner"];

/// First commit date: 2013-01-01T00:00:00Z; the span is ten years.
const EPOCH: i64 = 1_356_998_400;
const SPAN_SECONDS: i64 = 10 * 365 * 24 * 3600;

/// Generates `count` valid cases from `seed`. The same seed always gives
/// the same corpus.
pub fn synthetic_cases(seed: u64, count: usize) -> SyntheticCases {
    SyntheticCases {
        rng: ChaCha8Rng::seed_from_u64(seed),
        remaining: count,
        pending: Vec::new(),
    }
}

pub struct SyntheticCases {
    rng: ChaCha8Rng,
    remaining: usize,
    pending: Vec<RefactoringCase>,
}

impl Iterator for SyntheticCases {
    type Item = RefactoringCase;

    fn next(&mut self) -> Option<RefactoringCase> {
        if self.remaining == 0 {
            return None;
        }
        if self.pending.is_empty() {
            let size = self.rng.gen_range(1..=6).min(self.remaining);
            self.pending = commit_cases(&mut self.rng, size);
        }
        self.remaining -= 1;
        self.pending.pop()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

fn weighted_type<R: Rng>(rng: &mut R) -> &'static str {
    let total: u32 = TYPES.iter().map(|(_, w)| w).sum();
    let mut roll = rng.gen_range(0..total);
    for (name, weight) in TYPES {
        if roll < weight {
            return name;
        }
        roll -= weight;
    }
    unreachable!("roll is below the weight sum")
}

fn identifier<R: Rng>(rng: &mut R, prefix: &str) -> String {
    format!("{prefix}{}", NOUNS.choose(rng).expect("non-empty"))
}

fn fragment<R: Rng>(rng: &mut R, name: String, file: &str, lines: u64) -> CodeFragmentRef {
    let begin = rng.gen_range(1..2000);
    CodeFragmentRef {
        name,
        location: Location::span(file, begin, begin + lines - 1),
        extra: Map::new(),
    }
}

fn commit_cases<R: Rng>(rng: &mut R, size: usize) -> Vec<RefactoringCase> {
    let repository = *REPOSITORIES.choose(rng).expect("non-empty");
    let tool = *TOOLS.choose(rng).expect("non-empty");
    let mut sha = [0u8; 20];
    rng.fill(&mut sha);
    let when = DateTime::from_timestamp(EPOCH, 0).expect("valid epoch")
        + Duration::seconds(rng.gen_range(0..SPAN_SECONDS));
    let subject = NOUNS.choose(rng).expect("non-empty");
    let template = MESSAGES.choose(rng).expect("non-empty");
    let commit = CommitMeta {
        sha1: hex::encode(sha),
        date: when.to_rfc3339_opts(SecondsFormat::Secs, true),
        message: template.replace("{}", subject),
        author_name: format!("Developer {}", rng.gen_range(1..400)),
        size: CommitSize {
            files: FileCounts {
                changed: rng.gen_range(1..40),
            },
            lines: LineCounts {
                inserted: rng.gen_range(0..2000),
                deleted: rng.gen_range(0..2000),
            },
        },
        refactorings: RefactoringTotals { total: size as u64 },
        extra: Map::new(),
    };

    let mut cases = Vec::with_capacity(size);
    let mut attempt = 0;
    while cases.len() < size {
        attempt += 1;
        let kind = weighted_type(rng);
        let file = format!(
            "src/main/java/org/example/{}{}.java",
            NOUNS.choose(rng).expect("non-empty"),
            attempt
        );
        let from_prefix = *PREFIXES.choose(rng).expect("non-empty");
        let before_name = identifier(rng, from_prefix);
        let to_prefix = if from_prefix == "get" && rng.gen_bool(0.3) {
            "retrieve"
        } else {
            PREFIXES.choose(rng).expect("non-empty")
        };
        let after_name = if kind.starts_with("Rename") {
            identifier(rng, to_prefix)
        } else if kind.starts_with("Extract") {
            identifier(rng, "do")
        } else {
            before_name.clone()
        };
        let before_lines = rng.gen_range(3..300);
        let after_lines = rng.gen_range(2..=before_lines.max(3));
        let before = fragment(rng, format!("{before_name}()"), &file, before_lines);
        let after = fragment(rng, format!("{after_name}()"), &file, after_lines);

        let extract_method = (kind == "Extract Method" || kind == "Extract And Move Method").then(|| {
            ExtractMethodInfo {
                source_methods_count: if rng.gen_bool(0.15) { rng.gen_range(2..5) } else { 1 },
                source_method_lines: before_lines,
                extracted_lines: after_lines,
            }
        });
        let rename = kind.starts_with("Rename").then(|| RenameInfo {
            from: before_name.clone(),
            to: after_name.clone(),
        });
        let description = match kind {
            "Extract Method" => format!("Extracted method {}() from {}()", after_name, before_name),
            k if k.starts_with("Rename") => format!("{k} {before_name} renamed to {after_name}"),
            k => format!("{k} {before_name}"),
        };
        let mut case = RefactoringCase {
            id: String::new(),
            refactoring_type: kind.to_owned(),
            description,
            repository: repository.to_owned(),
            before: Some(before),
            after: Some(after),
            commit: commit.clone(),
            extract_method,
            rename,
            meta: CaseMeta::new(tool),
            extra: Map::new(),
        };
        case.id = case_id(&case);
        if cases.iter().all(|c: &RefactoringCase| c.id != case.id) {
            cases.push(case);
        }
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_case;
    use std::collections::{BTreeSet, HashSet};

    #[test]
    fn deterministic_valid_and_varied() {
        let a: Vec<_> = synthetic_cases(3, 2000).collect();
        let b: Vec<_> = synthetic_cases(3, 2000).collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2000);
        for case in &a {
            validate_case(case).unwrap_or_else(|v| panic!("{v:?}"));
        }
        let ids: HashSet<_> = a.iter().map(|c| &c.id).collect();
        assert_eq!(ids.len(), a.len());
        let types: BTreeSet<_> = a.iter().map(|c| &c.refactoring_type).collect();
        assert!(types.len() >= 10);
        let years: BTreeSet<_> = a.iter().map(|c| &c.commit.date[..4]).collect();
        assert_eq!(years.len(), 10, "{years:?}");
        assert!(a.iter().any(|c| c
            .rename
            .as_ref()
            .is_some_and(|r| r.from.starts_with("get") && r.to.starts_with("retrieve"))));
        assert!(a
            .iter()
            .any(|c| c.commit.message.to_lowercase().contains("extract")));
        assert!(a
            .iter()
            .any(|c| c.extract_method.is_some_and(|e| e.source_methods_count >= 2)));
    }
}
