use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;

use refsearch_api::{router, search, ApiConfig, AppState, ErrorCode, SearchParams};
use refsearch_core::bench::{parse_query_file, run_bench};
use refsearch_core::ingest::{run_job, CommitSource, DetectorInput, JobRegistry, JobRequest, StageStatus};
use refsearch_core::query::parse_query;
use refsearch_core::store::{SearchPage, Store};
use refsearch_core::synth::synthetic_cases;

use crate::{BenchArgs, Cli, Command, IndexAction, IngestArgs, OutputFormat, SearchArgs, ServeArgs, SynthArgs};

const SYNTH_BATCH: usize = 10_000;

/// Why a command stopped. Usage errors exit with 2, everything else with 1.
enum Failure {
    Usage(String),
    Failed(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure::Failed(err)
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cli: Cli) -> ExitCode {
    let data_dir = cli.data_dir.as_path();
    let result = match cli.command {
        Command::Ingest(args) => ingest(data_dir, args),
        Command::Search(args) => search_cmd(data_dir, args),
        Command::Serve(args) => serve(data_dir, args),
        Command::Bench(args) => bench(data_dir, args),
        Command::Stats => open_store(data_dir).and_then(|s| print_json(&s.stats())),
        Command::Index {
            action: IndexAction::Rebuild,
        } => open_store(data_dir).and_then(|s| print_json(&s.rebuild_indexes())),
        Command::Export { out } => export(data_dir, &out),
        Command::Import { input } => import(data_dir, &input),
        Command::Synth(args) => synth(data_dir, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("{message}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn open_store(data_dir: &Path) -> Result<Store, Failure> {
    let dir = data_dir.join("store");
    Ok(Store::open(&dir).with_context(|| format!("cannot open store in {}", dir.display()))?)
}

fn open_jobs(data_dir: &Path) -> Result<JobRegistry, Failure> {
    let dir = data_dir.join("jobs");
    Ok(JobRegistry::open(&dir).with_context(|| format!("cannot open job records in {}", dir.display()))?)
}

/// Writes to stdout. A reader that stops early (`| head`) is not an error.
fn emit(text: &str) -> Outcome {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure::Failed(anyhow::Error::new(e).context("cannot write output")))
        }
        _ => Ok(()),
    }
}

fn print_json(value: &impl serde::Serialize) -> Outcome {
    let text = serde_json::to_string_pretty(value).context("cannot encode output")?;
    emit(&format!("{text}\n"))
}

fn ingest(data_dir: &Path, args: IngestArgs) -> Outcome {
    let commit_source = match (&args.commits_jsonl, &args.clone_path) {
        (Some(path), _) => CommitSource::Jsonl { path: path.clone() },
        (None, Some(path)) => CommitSource::Clone { path: path.clone() },
        (None, None) => {
            return Err(Failure::Usage(
                "ingest needs commit metadata: pass --commits-jsonl or --clone-path".into(),
            ))
        }
    };
    let mut detector_inputs = Vec::new();
    for path in &args.rminer_json {
        detector_inputs.push(DetectorInput::File {
            tool: "refactoringminer".into(),
            path: path.clone(),
        });
    }
    for path in &args.refdiff_json {
        detector_inputs.push(DetectorInput::File {
            tool: "refdiff".into(),
            path: path.clone(),
        });
    }
    for spec in &args.detector_cmd {
        let Some((tool, command)) = spec.split_once('=') else {
            return Err(Failure::Usage(format!("--detector-cmd expects tool=command, got {spec:?}")));
        };
        detector_inputs.push(DetectorInput::Command {
            tool: tool.trim().into(),
            program: "sh".into(),
            args: vec!["-c".into(), command.into()],
        });
    }
    let request = JobRequest {
        repository_url: args.repo,
        detector_inputs,
        commit_source,
        repository_path: args.clone_path,
    };
    let store = open_store(data_dir)?;
    let jobs = open_jobs(data_dir)?;
    let job = run_job(&store, &request, &jobs.create(&request));
    print_json(&job.counts)?;
    match job.stages.iter().find(|s| s.status == StageStatus::Failed) {
        None => Ok(()),
        Some(stage) => Err(Failure::Failed(anyhow::anyhow!(
            "stage {} failed: {}",
            stage.name,
            stage.detail.as_deref().unwrap_or("no detail")
        ))),
    }
}

fn search_cmd(data_dir: &Path, args: SearchArgs) -> Outcome {
    if !args.query.trim().is_empty() {
        if let Err(err) = parse_query(&args.query) {
            return Err(Failure::Usage(format!(
                "parse error: {}\n{}",
                err,
                err.caret_display(&args.query)
            )));
        }
    }
    let params = SearchParams {
        q: Some(args.query),
        offset: args.offset,
        limit: args.limit,
        sort: args.sort,
    };
    let store = open_store(data_dir)?;
    let page = search(&store, &params).map_err(|err| match err.code {
        ErrorCode::ParseError | ErrorCode::BadRequest => Failure::Usage(err.message),
        _ => Failure::Failed(anyhow::anyhow!(err.message)),
    })?;
    match args.format {
        OutputFormat::Json => {
            let text = serde_json::to_string(&page).context("cannot encode output")?;
            emit(&format!("{text}\n"))
        }
        OutputFormat::Table => emit(&render_table(&page)),
    }
}

fn clip(text: &str, width: usize) -> String {
    let line = text.lines().next().unwrap_or("");
    if line.chars().count() <= width {
        line.to_owned()
    } else {
        let cut: String = line.chars().take(width - 1).collect();
        format!("{cut}…")
    }
}

fn render_table(page: &SearchPage) -> String {
    let rows: Vec<[String; 4]> = page
        .items
        .iter()
        .map(|c| {
            [
                c.repository.clone(),
                c.meta.tool.clone(),
                c.refactoring_type.clone(),
                clip(&c.description, 90),
            ]
        })
        .collect();
    let header = ["REPOSITORY", "TOOL", "TYPE", "DESCRIPTION"];
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut text = String::new();
    let mut print_row = |cells: [&str; 4]| {
        let line = format!(
            "{:w0$}  {:w1$}  {:w2$}  {}",
            cells[0],
            cells[1],
            cells[2],
            cells[3],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2]
        );
        text.push_str(line.trim_end());
        text.push('\n');
    };
    print_row(header);
    for row in &rows {
        print_row([&row[0], &row[1], &row[2], &row[3]]);
    }
    let first = if rows.is_empty() { 0 } else { page.offset + 1 };
    text.push_str(&format!("{}-{} of {}\n", first, page.offset + rows.len(), page.total));
    text
}

fn serve(data_dir: &Path, args: ServeArgs) -> Outcome {
    let store = open_store(data_dir)?;
    let jobs = open_jobs(data_dir)?;
    let config = ApiConfig {
        cors_origin: args.cors_origin,
        ui_dir: args.ui_dir,
    };
    if let Some(dir) = &config.ui_dir {
        if !dir.is_dir() {
            return Err(Failure::Usage(format!("--ui-dir {} is not a directory", dir.display())));
        }
    }
    let runtime = tokio::runtime::Runtime::new().context("cannot start the async runtime")?;
    runtime.block_on(async {
        let address = format!("{}:{}", args.host, args.port);
        let listener = tokio::net::TcpListener::bind(&address)
            .await
            .with_context(|| format!("cannot listen on {address}"))?;
        let bound = listener.local_addr().context("listener has no address")?;
        eprintln!("listening on http://{bound}");
        tracing::info!(%bound, "serving");
        let app = router(AppState::new(store, jobs), &config);
        refsearch_api::serve(listener, app).await.context("server failed")?;
        Ok(())
    })
}

fn bench(data_dir: &Path, args: BenchArgs) -> Outcome {
    let text = std::fs::read_to_string(&args.queries)
        .with_context(|| format!("cannot read {}", args.queries.display()))?;
    let queries = parse_query_file(&text).map_err(|e| Failure::Usage(format!("{}: {e}", args.queries.display())))?;
    if args.repeat == 0 {
        return Err(Failure::Usage("--repeat must be at least 1".into()));
    }
    let store = match args.synthetic {
        Some(count) => {
            let store = Store::open_in_memory();
            fill_synthetic(&store, args.seed, count)?;
            store
        }
        None => open_store(data_dir)?,
    };
    let report = run_bench(&store, &queries, args.repeat).context("benchmark failed")?;
    print_json(&report)
}

fn fill_synthetic(store: &Store, seed: u64, count: usize) -> Result<(usize, usize), Failure> {
    let mut cases = synthetic_cases(seed, count);
    let (mut stored, mut skipped) = (0, 0);
    loop {
        let batch: Vec<_> = cases.by_ref().take(SYNTH_BATCH).collect();
        if batch.is_empty() {
            return Ok((stored, skipped));
        }
        let outcome = store.put_cases(&batch).context("cannot store synthetic cases")?;
        stored += outcome.stored;
        skipped += outcome.skipped_duplicate;
    }
}

fn synth(data_dir: &Path, args: SynthArgs) -> Outcome {
    let store = open_store(data_dir)?;
    let (stored, skipped) = fill_synthetic(&store, args.seed, args.count)?;
    print_json(&serde_json::json!({"stored": stored, "skippedDuplicate": skipped, "caseCount": store.len()}))
}

fn export(data_dir: &Path, out: &Path) -> Outcome {
    let store = open_store(data_dir)?;
    let file = File::create(out).with_context(|| format!("cannot create {}", out.display()))?;
    let mut writer = BufWriter::new(file);
    let count = store
        .export_jsonl(&mut writer)
        .and_then(|n| writer.flush().map(|_| n))
        .with_context(|| format!("cannot write {}", out.display()))?;
    print_json(&serde_json::json!({"exported": count}))
}

fn import(data_dir: &Path, input: &Path) -> Outcome {
    let file = File::open(input).with_context(|| format!("cannot open {}", input.display()))?;
    let store = open_store(data_dir)?;
    let outcome = store
        .import_jsonl(BufReader::new(file))
        .with_context(|| format!("cannot import {}", input.display()))?;
    print_json(&outcome)
}

