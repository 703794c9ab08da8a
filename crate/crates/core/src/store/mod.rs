//! Embedded document store: cases kept in memory as JSON documents, made
//! durable through an append-only log, with sorted secondary indexes and a
//! small planner.

mod index;
mod plan;
mod sort;
mod wal;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock, RwLockReadGuard};

use serde::Serialize;
use serde_json::Value;

use crate::eval::{resolve_path, sort_value, FieldValue, PreparedQuery};
use crate::model::{from_json, to_json, validate_case, RefactoringCase, Violation};
use crate::query::QueryAst;

pub use index::{IndexDef, IndexStats};
pub use plan::{AccessPath, QueryPlan, RangeBound};
pub use sort::{SortParseError, SortSpec};
pub use wal::WalError;

use index::SortedIndex;
use plan::plan_query;
use wal::{LogRecord, Wal};

pub const MAX_LIMIT: usize = 200;
pub const DEFAULT_LIMIT: usize = 20;
const LOG_FILE: &str = "cases.wal";
const IMPORT_BATCH: usize = 1000;

/// Paths indexed by every store, in planner priority order.
pub fn default_index_defs() -> Vec<IndexDef> {
    vec![
        IndexDef::new("type"),
        IndexDef::new("repository"),
        IndexDef::new("commit.date"),
    ]
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error(transparent)]
    Log(#[from] WalError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("case {id} is invalid: {}", join_violations(.violations))]
    Invalid { id: String, violations: Vec<Violation> },
    #[error("limit {0} exceeds the maximum of {MAX_LIMIT}")]
    LimitTooLarge(usize),
    #[error("line {line}: {message}")]
    Import { line: usize, message: String },
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("{}: {}", v.path, v.message))
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PutOutcome {
    pub stored: usize,
    pub skipped_duplicate: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub offset: usize,
    pub limit: usize,
    pub sort: SortSpec,
    /// Ignore the indexes and test every document.
    pub force_full_scan: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            offset: 0,
            limit: DEFAULT_LIMIT,
            sort: SortSpec::default(),
            force_full_scan: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchPage {
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub items: Vec<RefactoringCase>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StoreStats {
    pub case_count: usize,
    pub commit_count: usize,
    pub repository_count: usize,
    pub counts_by_type: BTreeMap<String, usize>,
    pub counts_by_tool: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub name: String,
    pub path: String,
    #[serde(flatten)]
    pub stats: IndexStats,
}

#[derive(Debug)]
struct State {
    docs: Vec<Value>,
    by_id: HashMap<String, u32>,
    indexes: Vec<SortedIndex>,
}

impl State {
    fn new(defs: &[IndexDef]) -> Self {
        State {
            docs: Vec::new(),
            by_id: HashMap::new(),
            indexes: defs.iter().cloned().map(SortedIndex::new).collect(),
        }
    }

    fn apply(&mut self, record: LogRecord) {
        match record {
            LogRecord::Put(docs) => {
                for doc in docs {
                    self.insert(doc);
                }
            }
            LogRecord::Purge(repository) => {
                let defs: Vec<_> = self.indexes.iter().map(|i| i.def.clone()).collect();
                let docs = std::mem::take(&mut self.docs);
                *self = State::new(&defs);
                for doc in docs {
                    if doc.get("repository").and_then(Value::as_str) != Some(repository.as_str()) {
                        self.insert(doc);
                    }
                }
            }
        }
    }

    fn insert(&mut self, doc: Value) {
        let Some(id) = doc.get("id").and_then(Value::as_str) else {
            return;
        };
        if self.by_id.contains_key(id) {
            return;
        }
        let position = u32::try_from(self.docs.len()).expect("fewer than 2^32 documents");
        self.by_id.insert(id.to_owned(), position);
        for index in &mut self.indexes {
            index.insert(position, &doc);
        }
        self.docs.push(doc);
    }

    fn build_indexes(&self) -> Vec<SortedIndex> {
        self.indexes
            .iter()
            .map(|old| {
                let mut index = SortedIndex::new(old.def.clone());
                for (position, doc) in self.docs.iter().enumerate() {
                    index.insert(position as u32, doc);
                }
                index
            })
            .collect()
    }

    fn candidates(&self, plan: &QueryPlan) -> Option<Vec<u32>> {
        let index_named = |name: &str| self.indexes.iter().find(|i| i.def.name == name);
        match &plan.access {
            AccessPath::FullScan => None,
            AccessPath::IndexEq { index, key } => index_named(index).map(|i| i.lookup_eq(key)),
            AccessPath::IndexRange {
                index,
                lower,
                upper,
            } => {
                let lower = lower.as_ref().map(|b| (&b.literal, b.inclusive));
                let upper = upper.as_ref().map(|b| (&b.literal, b.inclusive));
                index_named(index).map(|i| i.lookup_range(lower, upper))
            }
        }
    }

    fn plan_for(&self, ast: Option<&QueryAst>, force_full_scan: bool) -> QueryPlan {
        if force_full_scan {
            QueryPlan {
                access: AccessPath::FullScan,
                residual: ast.cloned(),
            }
        } else {
            plan_query(ast, &self.indexes)
        }
    }

    /// Positions of matching documents in result order, cut to the first
    /// `keep` when given, together with the full match count.
    fn execute(&self, plan: &QueryPlan, sort: &SortSpec, keep: Option<usize>) -> (Vec<u32>, usize) {
        let prepared = plan.residual.as_ref().map(PreparedQuery::new);
        let accept = |p: &u32| prepared.as_ref().is_none_or(|q| q.matches(&self.docs[*p as usize]));
        let positions: Vec<u32> = match self.candidates(plan) {
            Some(list) => list.into_iter().filter(accept).collect(),
            None => (0..self.docs.len() as u32).filter(accept).collect(),
        };
        let total = positions.len();
        (self.order(positions, sort, keep), total)
    }

    fn order(&self, positions: Vec<u32>, sort: &SortSpec, keep: Option<usize>) -> Vec<u32> {
        let mut keyed: Vec<(FieldValue<'_>, &str, u32)> = positions
            .into_iter()
            .map(|p| {
                let doc = &self.docs[p as usize];
                let key = sort_value(resolve_path(doc, &sort.path));
                let id = doc.get("id").and_then(Value::as_str).unwrap_or("");
                (key, id, p)
            })
            .collect();
        let cmp = |a: &(FieldValue<'_>, &str, u32), b: &(FieldValue<'_>, &str, u32)| {
            sort::compare_entries(sort, (&a.0, a.1), (&b.0, b.1))
        };
        if let Some(k) = keep {
            if k == 0 {
                keyed.clear();
            } else if k < keyed.len() {
                keyed.select_nth_unstable_by(k - 1, cmp);
                keyed.truncate(k);
            }
        }
        keyed.sort_unstable_by(cmp);
        keyed.into_iter().map(|(_, _, p)| p).collect()
    }
}

/// The case store. Reads run concurrently against a consistent snapshot;
/// writes are serialized and each batch becomes visible all at once.
#[derive(Debug)]
pub struct Store {
    state: RwLock<State>,
    log: Mutex<Option<Wal>>,
    dir: Option<PathBuf>,
}

impl Store {
    /// A store that lives only as long as the value.
    pub fn open_in_memory() -> Self {
        Store {
            state: RwLock::new(State::new(&default_index_defs())),
            log: Mutex::new(None),
            dir: None,
        }
    }

    /// Opens or creates a store in `dir`, replaying its log.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|source| StoreError::Io {
            path: dir.to_owned(),
            source,
        })?;
        let mut state = State::new(&default_index_defs());
        let wal = Wal::open(&dir.join(LOG_FILE), |record| state.apply(record))?;
        tracing::debug!(dir = %dir.display(), cases = state.docs.len(), "store opened");
        Ok(Store {
            state: RwLock::new(state),
            log: Mutex::new(Some(wal)),
            dir: Some(dir.to_owned()),
        })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn read(&self) -> RwLockReadGuard<'_, State> {
        self.state.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn len(&self) -> usize {
        self.read().docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Validates and stores a batch. Cases whose id is already stored, or
    /// repeats within the batch, are skipped. The batch is durable when this
    /// returns; on error nothing from it is stored.
    pub fn put_cases(&self, batch: &[RefactoringCase]) -> Result<PutOutcome, StoreError> {
        for case in batch {
            validate_case(case).map_err(|violations| StoreError::Invalid {
                id: case.id.clone(),
                violations,
            })?;
        }
        let mut log = self.log.lock().unwrap_or_else(|e| e.into_inner());
        let fresh: Vec<Value> = {
            let state = self.read();
            let mut seen = HashSet::new();
            batch
                .iter()
                .filter(|c| !state.by_id.contains_key(&c.id) && seen.insert(c.id.as_str()))
                .map(to_json)
                .collect()
        };
        let outcome = PutOutcome {
            stored: fresh.len(),
            skipped_duplicate: batch.len() - fresh.len(),
        };
        if fresh.is_empty() {
            return Ok(outcome);
        }
        let record = LogRecord::Put(fresh);
        if let Some(wal) = log.as_mut() {
            wal.append(&record)?;
        }
        self.state
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .apply(record);
        Ok(outcome)
    }

    /// Removes every case of a repository and returns how many were removed.
    pub fn purge_repository(&self, repository: &str) -> Result<usize, StoreError> {
        let mut log = self.log.lock().unwrap_or_else(|e| e.into_inner());
        let before = self.len();
        let record = LogRecord::Purge(repository.to_owned());
        if let Some(wal) = log.as_mut() {
            wal.append(&record)?;
        }
        let mut state = self.state.write().unwrap_or_else(|e| e.into_inner());
        state.apply(record);
        Ok(before - state.docs.len())
    }

    pub fn get_case(&self, id: &str) -> Option<RefactoringCase> {
        let state = self.read();
        let position = *state.by_id.get(id)?;
        from_json(&state.docs[position as usize]).ok()
    }

    /// The stored document exactly as written.
    pub fn get_document(&self, id: &str) -> Option<Value> {
        let state = self.read();
        let position = *state.by_id.get(id)?;
        Some(state.docs[position as usize].clone())
    }

    pub fn plan(&self, ast: Option<&QueryAst>) -> QueryPlan {
        plan_query(ast, &self.read().indexes)
    }

    /// One page of matches. `None` matches every case.
    pub fn search(&self, ast: Option<&QueryAst>, options: &SearchOptions) -> Result<SearchPage, StoreError> {
        if options.limit > MAX_LIMIT {
            return Err(StoreError::LimitTooLarge(options.limit));
        }
        let state = self.read();
        let plan = state.plan_for(ast, options.force_full_scan);
        let keep = options.offset.saturating_add(options.limit);
        let (positions, total) = state.execute(&plan, &options.sort, Some(keep));
        let page = positions.into_iter().skip(options.offset);
        let items = page
            .into_iter()
            .filter_map(|p| from_json(&state.docs[p as usize]).ok())
            .collect();
        Ok(SearchPage {
            total,
            offset: options.offset,
            limit: options.limit,
            items,
        })
    }

    /// Ids of every match in result order.
    pub fn matching_ids(&self, ast: Option<&QueryAst>, sort: &SortSpec, force_full_scan: bool) -> Vec<String> {
        let state = self.read();
        let plan = state.plan_for(ast, force_full_scan);
        state
            .execute(&plan, sort, None)
            .0
            .into_iter()
            .map(|p| {
                let doc = &state.docs[p as usize];
                doc.get("id").and_then(Value::as_str).unwrap_or("").to_owned()
            })
            .collect()
    }

    /// Rebuilds every index from the documents.
    pub fn rebuild_indexes(&self) -> Vec<IndexReport> {
        let fresh = self.read().build_indexes();
        let mut state = self.state.write().unwrap_or_else(|e| e.into_inner());
        state.indexes = fresh;
        reports(&state.indexes)
    }

    pub fn index_stats(&self) -> Vec<IndexReport> {
        reports(&self.read().indexes)
    }

    pub fn stats(&self) -> StoreStats {
        let state = self.read();
        let mut stats = StoreStats {
            case_count: state.docs.len(),
            ..StoreStats::default()
        };
        let mut commits = BTreeSet::new();
        let mut repositories = BTreeSet::new();
        let text = |doc: &Value, pointer: &str| doc.pointer(pointer).and_then(Value::as_str).map(str::to_owned);
        for doc in &state.docs {
            let repository = text(doc, "/repository").unwrap_or_default();
            if let Some(sha) = text(doc, "/commit/sha1") {
                commits.insert((repository.clone(), sha));
            }
            repositories.insert(repository);
            if let Some(t) = text(doc, "/type") {
                *stats.counts_by_type.entry(t).or_default() += 1;
            }
            if let Some(t) = text(doc, "/meta/tool") {
                *stats.counts_by_tool.entry(t).or_default() += 1;
            }
        }
        stats.commit_count = commits.len();
        stats.repository_count = repositories.len();
        stats
    }

    /// Writes every case as one JSON line, in insertion order.
    pub fn export_jsonl(&self, mut out: impl Write) -> io::Result<usize> {
        let state = self.read();
        for doc in &state.docs {
            serde_json::to_writer(&mut out, doc)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(state.docs.len())
    }

    /// Reads JSON lines of cases and stores them in batches. Blank lines
    /// are ignored. Every line is checked before anything is stored.
    pub fn import_jsonl(&self, input: impl BufRead) -> Result<PutOutcome, StoreError> {
        let mut cases = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line_no = i + 1;
            let import_err = |message: String| StoreError::Import {
                line: line_no,
                message,
            };
            let line = line.map_err(|e| import_err(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let value: Value = serde_json::from_str(&line).map_err(|e| import_err(e.to_string()))?;
            let case = from_json(&value).map_err(|e| import_err(e.to_string()))?;
            validate_case(&case).map_err(|v| import_err(join_violations(&v)))?;
            cases.push(case);
        }
        let mut total = PutOutcome::default();
        for chunk in cases.chunks(IMPORT_BATCH) {
            let outcome = self.put_cases(chunk)?;
            total.stored += outcome.stored;
            total.skipped_duplicate += outcome.skipped_duplicate;
        }
        Ok(total)
    }
}

fn reports(indexes: &[SortedIndex]) -> Vec<IndexReport> {
    indexes
        .iter()
        .map(|i| IndexReport {
            name: i.def.name.clone(),
            path: i.def.path.dotted(),
            stats: i.stats(),
        })
        .collect()
}

#[cfg(test)]
mod tests;
