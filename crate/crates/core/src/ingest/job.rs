use std::collections::{BTreeMap, BTreeSet};
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::{Arc, RwLock};

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::{
    canonical_tool_name, convert, fetch_commit_records, parse_detector_output, CommitSource,
    DetectorRecord,
};
use crate::store::Store;

const STORE_BATCH: usize = 500;

/// What to ingest for one repository.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct JobRequest {
    pub repository_url: String,
    pub detector_inputs: Vec<DetectorInput>,
    pub commit_source: CommitSource,
    /// Local checkout handed to detector commands. Defaults to the clone
    /// used as commit source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repository_path: Option<PathBuf>,
}

/// Detector output, either already exported to a file or produced by a
/// command that prints it. `{repo}` in command arguments is replaced by the
/// repository path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DetectorInput {
    File {
        tool: String,
        path: PathBuf,
    },
    Command {
        tool: String,
        program: String,
        #[serde(default)]
        args: Vec<String>,
    },
}

impl DetectorInput {
    pub fn tool(&self) -> &str {
        match self {
            DetectorInput::File { tool, .. } | DetectorInput::Command { tool, .. } => tool,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageName {
    RunDetectors,
    FetchCommits,
    Convert,
    Store,
    Index,
}

impl StageName {
    /// Execution order. Detectors run first because the commits to fetch
    /// are the ones their records mention.
    pub const ORDER: [StageName; 5] = [
        StageName::RunDetectors,
        StageName::FetchCommits,
        StageName::Convert,
        StageName::Store,
        StageName::Index,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StageName::RunDetectors => "run-detectors",
            StageName::FetchCommits => "fetch-commits",
            StageName::Convert => "convert",
            StageName::Store => "store",
            StageName::Index => "index",
        }
    }
}

impl std::fmt::Display for StageName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Pending,
    Running,
    Done,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Stage {
    pub name: StageName,
    pub status: StageStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub started_at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finished_at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct JobCounts {
    pub commits_seen: usize,
    pub records_parsed: usize,
    pub cases_stored: usize,
    pub cases_skipped_duplicate: usize,
    pub records_rejected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IngestJob {
    pub job_id: String,
    pub repository_url: String,
    pub created_at: String,
    pub status: StageStatus,
    pub stages: Vec<Stage>,
    pub counts: JobCounts,
}

impl IngestJob {
    fn new(repository_url: &str) -> Self {
        IngestJob {
            job_id: uuid::Uuid::new_v4().to_string(),
            repository_url: repository_url.to_owned(),
            created_at: now(),
            status: StageStatus::Pending,
            stages: StageName::ORDER
                .iter()
                .map(|&name| Stage {
                    name,
                    status: StageStatus::Pending,
                    started_at: None,
                    finished_at: None,
                    detail: None,
                })
                .collect(),
            counts: JobCounts::default(),
        }
    }

    pub fn stage(&self, name: StageName) -> &Stage {
        self.stages
            .iter()
            .find(|s| s.name == name)
            .expect("every job has every stage")
    }

    fn stage_mut(&mut self, name: StageName) -> &mut Stage {
        self.stages
            .iter_mut()
            .find(|s| s.name == name)
            .expect("every job has every stage")
    }

    pub fn is_finished(&self) -> bool {
        matches!(self.status, StageStatus::Done | StageStatus::Failed)
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct LogLine<'a> {
    at: &'a str,
    job_id: &'a str,
    stage: StageName,
    status: StageStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<&'a str>,
}

/// Shared, observable state of one job. Every change is persisted when the
/// registry has a directory.
#[derive(Debug, Clone)]
pub struct JobHandle {
    job: Arc<RwLock<IngestJob>>,
    dir: Option<PathBuf>,
}

impl JobHandle {
    pub fn id(&self) -> String {
        self.snapshot().job_id
    }

    pub fn snapshot(&self) -> IngestJob {
        self.job.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    fn update(&self, f: impl FnOnce(&mut IngestJob)) {
        let mut job = self.job.write().unwrap_or_else(|e| e.into_inner());
        f(&mut job);
        if let Some(dir) = &self.dir {
            if let Err(err) = persist(dir, &job) {
                tracing::warn!(job = %job.job_id, %err, "cannot persist job state");
            }
        }
    }

    fn transition(&self, name: StageName, status: StageStatus, detail: Option<String>) {
        self.update(|job| {
            let at = now();
            let stage = job.stage_mut(name);
            stage.status = status;
            match status {
                StageStatus::Running => stage.started_at = Some(at.clone()),
                StageStatus::Done | StageStatus::Failed => stage.finished_at = Some(at.clone()),
                StageStatus::Pending => {}
            }
            if detail.is_some() {
                stage.detail = detail;
            }
            job.status = match status {
                StageStatus::Failed => StageStatus::Failed,
                StageStatus::Done if name == StageName::Index => StageStatus::Done,
                _ => StageStatus::Running,
            };
            let line = LogLine {
                at: &at,
                job_id: &job.job_id,
                stage: name,
                status,
                detail: job.stage(name).detail.as_deref(),
            };
            tracing::info!(target: "refsearch::job", "{}", serde_json::to_string(&line).unwrap_or_default());
            if let Some(dir) = &self.dir {
                let path = dir.join(format!("{}.log", job.job_id));
                let written = OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&path)
                    .and_then(|mut f| {
                        serde_json::to_writer(&mut f, &line)?;
                        f.write_all(b"\n")
                    });
                if let Err(err) = written {
                    tracing::warn!(path = %path.display(), %err, "cannot write job log");
                }
            }
        });
    }
}

fn persist(dir: &Path, job: &IngestJob) -> std::io::Result<()> {
    let path = dir.join(format!("{}.json", job.job_id));
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, serde_json::to_vec_pretty(job)?)?;
    std::fs::rename(tmp, path)
}

/// All jobs known to a store, kept in memory and mirrored to a directory.
#[derive(Debug, Default)]
pub struct JobRegistry {
    dir: Option<PathBuf>,
    jobs: RwLock<BTreeMap<String, JobHandle>>,
}

impl JobRegistry {
    pub fn in_memory() -> Self {
        JobRegistry::default()
    }

    /// Loads persisted jobs from `dir`. Jobs left unfinished by a previous
    /// process are marked failed.
    pub fn open(dir: impl AsRef<Path>) -> std::io::Result<Self> {
        let dir = dir.as_ref().to_owned();
        std::fs::create_dir_all(&dir)?;
        let mut jobs = BTreeMap::new();
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|e| e != "json") {
                continue;
            }
            let job: IngestJob = match std::fs::read(&path)
                .ok()
                .and_then(|bytes| serde_json::from_slice(&bytes).ok())
            {
                Some(job) => job,
                None => {
                    tracing::warn!(path = %path.display(), "skipping unreadable job file");
                    continue;
                }
            };
            let handle = JobHandle {
                job: Arc::new(RwLock::new(job)),
                dir: Some(dir.clone()),
            };
            if !handle.snapshot().is_finished() {
                let running: Vec<_> = handle
                    .snapshot()
                    .stages
                    .iter()
                    .filter(|s| s.status == StageStatus::Running)
                    .map(|s| s.name)
                    .collect();
                for name in running {
                    handle.transition(name, StageStatus::Failed, Some("interrupted".into()));
                }
                handle.update(|job| job.status = StageStatus::Failed);
            }
            jobs.insert(handle.id(), handle);
        }
        Ok(JobRegistry {
            dir: Some(dir),
            jobs: RwLock::new(jobs),
        })
    }

    /// Registers a new pending job.
    pub fn create(&self, request: &JobRequest) -> JobHandle {
        let handle = JobHandle {
            job: Arc::new(RwLock::new(IngestJob::new(&request.repository_url))),
            dir: self.dir.clone(),
        };
        handle.update(|_| {});
        self.jobs
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(handle.id(), handle.clone());
        handle
    }

    pub fn get(&self, id: &str) -> Option<IngestJob> {
        let jobs = self.jobs.read().unwrap_or_else(|e| e.into_inner());
        jobs.get(id).map(JobHandle::snapshot)
    }

    /// Every job, newest first.
    pub fn list(&self) -> Vec<IngestJob> {
        let jobs = self.jobs.read().unwrap_or_else(|e| e.into_inner());
        let mut all: Vec<_> = jobs.values().map(JobHandle::snapshot).collect();
        all.sort_by(|a, b| b.created_at.cmp(&a.created_at).then_with(|| a.job_id.cmp(&b.job_id)));
        all
    }
}

#[derive(Debug)]
struct StageFailure(String);

impl<E: std::fmt::Display> From<E> for StageFailure {
    fn from(err: E) -> Self {
        StageFailure(err.to_string())
    }
}

/// Runs every stage of a job against `store`, recording progress on
/// `handle`. The first failing stage stops the job.
pub fn run_job(store: &Store, request: &JobRequest, handle: &JobHandle) -> IngestJob {
    let mut records: Vec<DetectorRecord> = Vec::new();
    let mut commits = BTreeMap::new();
    let mut cases = Vec::new();

    let stage = |name: StageName, body: &mut dyn FnMut() -> Result<String, StageFailure>| -> bool {
        handle.transition(name, StageStatus::Running, None);
        match body() {
            Ok(detail) => {
                handle.transition(name, StageStatus::Done, Some(detail));
                true
            }
            Err(StageFailure(message)) => {
                handle.transition(name, StageStatus::Failed, Some(message));
                false
            }
        }
    };

    let ok = stage(StageName::RunDetectors, &mut || {
        if request.detector_inputs.is_empty() {
            return Err(StageFailure("no detector input given".into()));
        }
        let mut parsed = 0;
        let mut rejected = 0;
        for input in &request.detector_inputs {
            let tool = canonical_tool_name(input.tool())
                .ok_or_else(|| StageFailure(format!("unknown detector {:?}", input.tool())))?;
            let text = detector_output(input, request)?;
            let out = parse_detector_output(tool, &text)
                .map_err(|e| StageFailure(format!("{tool}: {e}")))?;
            parsed += out.seen();
            rejected += out.rejected.len();
            for r in &out.rejected {
                tracing::debug!(locator = %r.locator, reason = %r.reason, "record rejected");
            }
            records.extend(out.records);
        }
        handle.update(|job| {
            job.counts.records_parsed += parsed;
            job.counts.records_rejected += rejected;
        });
        Ok(format!("{parsed} records parsed, {rejected} rejected"))
    });

    let ok = ok
        && stage(StageName::FetchCommits, &mut || {
            let referenced: BTreeSet<String> =
                records.iter().map(|r| r.commit_sha1.clone()).collect();
            commits = fetch_commit_records(&request.commit_source, &referenced)?;
            handle.update(|job| job.counts.commits_seen = commits.len());
            Ok(format!("{} commits", commits.len()))
        });

    let ok = ok
        && stage(StageName::Convert, &mut || {
            let out = convert(&records, &commits, &request.repository_url);
            handle.update(|job| {
                job.counts.records_rejected += out.rejected.len();
                job.counts.cases_skipped_duplicate += out.duplicates;
            });
            let detail = format!(
                "{} cases, {} rejected, {} duplicate",
                out.cases.len(),
                out.rejected.len(),
                out.duplicates
            );
            for r in &out.rejected {
                tracing::debug!(locator = %r.locator, reason = %r.reason, "record rejected");
            }
            cases = out.cases;
            Ok(detail)
        });

    let ok = ok
        && stage(StageName::Store, &mut || {
            let mut batches = 0;
            for batch in cases.chunks(STORE_BATCH) {
                let outcome = store.put_cases(batch)?;
                batches += 1;
                handle.update(|job| {
                    job.counts.cases_stored += outcome.stored;
                    job.counts.cases_skipped_duplicate += outcome.skipped_duplicate;
                });
            }
            let counts = handle.snapshot().counts;
            Ok(format!(
                "{} stored, {} already present, {batches} batches",
                counts.cases_stored, counts.cases_skipped_duplicate
            ))
        });

    let _ = ok
        && stage(StageName::Index, &mut || {
            let reports = store.index_stats();
            let parts: Vec<_> = reports
                .iter()
                .map(|r| format!("{}: {} entries", r.name, r.stats.entries))
                .collect();
            Ok(parts.join(", "))
        });

    handle.snapshot()
}

fn detector_output(input: &DetectorInput, request: &JobRequest) -> Result<String, StageFailure> {
    match input {
        DetectorInput::File { path, .. } => std::fs::read_to_string(path)
            .map_err(|e| StageFailure(format!("cannot read {}: {e}", path.display()))),
        DetectorInput::Command { program, args, .. } => {
            let repo = request
                .repository_path
                .clone()
                .or_else(|| match &request.commit_source {
                    CommitSource::Clone { path } => Some(path.clone()),
                    CommitSource::Jsonl { .. } => None,
                });
            let args: Vec<String> = args
                .iter()
                .map(|a| match &repo {
                    Some(repo) => a.replace("{repo}", &repo.to_string_lossy()),
                    None => a.clone(),
                })
                .collect();
            if repo.is_none() && args.iter().any(|a| a.contains("{repo}")) {
                return Err(StageFailure("command needs {repo} but no repository path is known".into()));
            }
            let output = Command::new(program)
                .args(&args)
                .output()
                .map_err(|e| StageFailure(format!("cannot run {program}: {e}")))?;
            if !output.status.success() {
                let stderr = String::from_utf8_lossy(&output.stderr);
                let tail: String = stderr.lines().rev().take(5).collect::<Vec<_>>().into_iter().rev().collect::<Vec<_>>().join("\n");
                return Err(StageFailure(format!("{program} exited with {}: {tail}", output.status)));
            }
            String::from_utf8(output.stdout).map_err(|_| StageFailure(format!("{program} printed invalid UTF-8")))
        }
    }
}
