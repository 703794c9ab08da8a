//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tower::ServiceExt;

use refsearch_api::{router, ApiConfig, AppState};
use refsearch_core::bench::{parse_query_file, run_bench};
use refsearch_core::ingest::{run_job, CommitSource, DetectorInput, JobCounts, JobRegistry, JobRequest, StageStatus};
use refsearch_core::model::{case_id, from_json};
use refsearch_core::query::{parse_query, ComparisonOp, FieldPath, Literal, QueryAst};
use refsearch_core::store::{SearchOptions, SortSpec, Store};
use refsearch_core::synth::synthetic_cases;
use refsearch_testkit::gen::{case_docs, query_text, query_texts};
use refsearch_testkit::oracle::oracle_filter;

const GRADLE_ID: &str = "ee950f93fdeefe289ab9d6ed1957e3ef24f1b4e1";
const GRADLE_SHA: &str = "e35b0a8c39182fdfbd11164eee028099657c0393";

const RENAME_GET_RETRIEVE: &str = "type ~ /^Rename/ & rename.from ~ /^get/i & rename.to ~ /^retrieve/i";
const MULTI_SOURCE_EXTRACT: &str = r#"type = "Extract Method" & extractMethod.sourceMethodsCount >= 2"#;
const LONG_SOURCE_EXTRACT: &str = r#"type = "Extract Method" & extractMethod.sourceMethodLines >= 100"#;
const EXTRACT_MESSAGE: &str = r#"type = "Extract Method" & commit.message ~ /extract/i"#;
const LONG_EXTRACTED: &str = r#"type = "Extract Method" & extractMethod.extractedLines >= 10"#;

type Criterion = (&'static str, fn() -> Result<String>);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("grammar fidelity", grammar_fidelity),
        ("oracle equivalence", oracle_equivalence),
        ("example case round-trip", example_case_round_trip),
        ("set algebra", set_algebra),
        ("idempotent ingestion", idempotent_ingestion),
        ("latency on 300k synthetic cases", latency),
        ("pagination completeness", pagination),
        ("api/cli parity", api_cli_parity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(anyhow::anyhow!(message))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name} ({secs:.2}s): {detail}"),
            Err(err) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.2}s): {err:#}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn cmp(path: &str, op: ComparisonOp, literal: Literal) -> QueryAst {
    QueryAst::cmp(FieldPath::parse(path).unwrap(), op, literal)
}

fn num(lexeme: &str) -> Literal {
    Literal::num(lexeme).unwrap()
}

fn re(pattern: &str, ci: bool) -> Literal {
    Literal::regex(pattern, ci).unwrap()
}

fn grammar_fidelity() -> Result<String> {
    use ComparisonOp::*;
    let start = Instant::now();
    let extract = || cmp("type", Eq, Literal::str("Extract Method"));
    let expected = [
        (
            RENAME_GET_RETRIEVE,
            QueryAst::and(
                cmp("type", Match, re("^Rename", false)),
                QueryAst::and(
                    cmp("rename.from", Match, re("^get", true)),
                    cmp("rename.to", Match, re("^retrieve", true)),
                ),
            ),
        ),
        (
            MULTI_SOURCE_EXTRACT,
            QueryAst::and(extract(), cmp("extractMethod.sourceMethodsCount", Ge, num("2"))),
        ),
        (
            LONG_SOURCE_EXTRACT,
            QueryAst::and(extract(), cmp("extractMethod.sourceMethodLines", Ge, num("100"))),
        ),
        (
            EXTRACT_MESSAGE,
            QueryAst::and(extract(), cmp("commit.message", Match, re("extract", true))),
        ),
        (
            LONG_EXTRACTED,
            QueryAst::and(extract(), cmp("extractMethod.extractedLines", Ge, num("10"))),
        ),
        (
            "a = 1 | b = 2 & c = 3",
            QueryAst::or(
                cmp("a", Eq, num("1")),
                QueryAst::and(cmp("b", Eq, num("2")), cmp("c", Eq, num("3"))),
            ),
        ),
    ];
    for (text, tree) in &expected {
        let parsed = parse_query(text).with_context(|| format!("{text} does not parse"))?;
        ensure!(&parsed == tree, "{text} parsed as {parsed:?}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("{} queries match their expected trees", expected.len()))
}

/// Generated documents with the ids the store will assign. Later
/// duplicates are dropped, as the store would.
fn identified_corpus(seed: u64, n: usize) -> Vec<Value> {
    let mut seen = HashSet::new();
    case_docs(seed, n)
        .into_iter()
        .filter_map(|mut doc| {
            let id = case_id(&from_json(&doc).unwrap());
            doc["id"] = Value::String(id.clone());
            seen.insert(id).then_some(doc)
        })
        .collect()
}

fn load(docs: &[Value]) -> Store {
    let store = Store::open_in_memory();
    let cases: Vec<_> = docs.iter().map(|d| from_json(d).unwrap()).collect();
    let outcome = store.put_cases(&cases).unwrap();
    assert_eq!(outcome.stored, docs.len());
    store
}

/// Sort fields that every generated document carries as a string.
const ORDER_FIELDS: [(&str, &str, bool); 4] = [
    ("commit.date:desc", "commit.date", true),
    ("type:asc", "type", false),
    ("repository:desc", "repository", true),
    ("commit.sha1:asc", "commit.sha1", false),
];

fn field_str<'a>(doc: &'a Value, dotted: &str) -> &'a str {
    dotted
        .split('.')
        .fold(doc, |v, k| &v[k])
        .as_str()
        .expect("order field is a string")
}

/// Expected result order: the sort field, then id ascending.
fn oracle_ids(docs: &[Value], matches: &[usize], field: &str, descending: bool) -> Vec<String> {
    let mut rows: Vec<(&str, &str)> = matches
        .iter()
        .map(|&i| (field_str(&docs[i], field), docs[i]["id"].as_str().unwrap()))
        .collect();
    rows.sort_by(|a, b| {
        let key = if descending { b.0.cmp(a.0) } else { a.0.cmp(b.0) };
        key.then_with(|| a.1.cmp(b.1))
    });
    rows.into_iter().map(|(_, id)| id.to_owned()).collect()
}

fn oracle_equivalence() -> Result<String> {
    let start = Instant::now();
    let docs = identified_corpus(2024, 1100);
    ensure!(docs.len() >= 1000, "only {} distinct documents", docs.len());
    let store = load(&docs);
    let pins = [
        r#"type = "Extract Method""#,
        r#"repository = "https://github.com/square/okhttp""#,
        r#"commit.date >= "2018""#,
        r#"type = "Rename Method""#,
    ];
    let (mut indexed, mut nonempty) = (0, 0);
    let queries = query_texts(99, 240);
    for (i, raw) in queries.iter().enumerate() {
        let text = if i % 3 == 0 {
            format!("{} & ({raw})", pins[i / 3 % pins.len()])
        } else {
            raw.clone()
        };
        let ast = parse_query(&text).with_context(|| text.clone())?;
        let (sort_text, field, descending) = ORDER_FIELDS[i % ORDER_FIELDS.len()];
        let sort: SortSpec = sort_text.parse().unwrap();
        let matches = oracle_filter(&text, &docs).map_err(|e| anyhow::anyhow!("oracle rejects {text}: {e}"))?;
        let expected = oracle_ids(&docs, &matches, field, descending);
        let planned = store.matching_ids(Some(&ast), &sort, false);
        let scanned = store.matching_ids(Some(&ast), &sort, true);
        ensure!(planned == scanned, "planned and full scan differ for {text}");
        ensure!(planned == expected, "engine and oracle differ for {text} sorted by {sort_text}");
        indexed += usize::from(store.plan(Some(&ast)).access.to_string() != "FullScan");
        nonempty += usize::from(!expected.is_empty());
    }
    ensure!(indexed >= 50, "only {indexed} queries used an index");
    ensure!(nonempty >= 100, "only {nonempty} queries matched anything");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!(
        "{} docs x {} queries agree ({indexed} indexed, {nonempty} non-empty)",
        docs.len(),
        queries.len()
    ))
}

fn job_request(detectors: &[(&str, &str)]) -> JobRequest {
    JobRequest {
        repository_url: "https://github.com/gradle/gradle.git".into(),
        detector_inputs: detectors
            .iter()
            .map(|(tool, file)| DetectorInput::File {
                tool: (*tool).into(),
                path: fixture(file),
            })
            .collect(),
        commit_source: CommitSource::Jsonl {
            path: fixture("gradle_commits.jsonl"),
        },
        repository_path: None,
    }
}

fn ingest(store: &Store, detectors: &[(&str, &str)]) -> Result<JobCounts> {
    let jobs = JobRegistry::in_memory();
    let request = job_request(detectors);
    let job = run_job(store, &request, &jobs.create(&request));
    ensure!(
        job.status == StageStatus::Done,
        "job failed: {}",
        serde_json::to_string(&job.stages)?
    );
    Ok(job.counts)
}

fn example_case_round_trip() -> Result<String> {
    let store = Store::open_in_memory();
    ingest(&store, &[("refdiff", "gradle_refdiff.json")])?;
    let ast = parse_query(LONG_SOURCE_EXTRACT)?;
    let page = store.search(Some(&ast), &SearchOptions::default())?;
    ensure!(
        page.items.iter().any(|c| c.id == GRADLE_ID),
        "long-source extract query misses the example case"
    );

    let case = store.get_case(GRADLE_ID).context("example case not stored")?;
    let before = case.before.as_ref().context("before missing")?;
    let after = case.after.as_ref().context("after missing")?;
    let em = case.extract_method.context("extractMethod missing")?;
    let file_suffix = "/NamedObjectInstantiator.java";
    let checks: [(&str, bool); 19] = [
        ("type", case.refactoring_type == "Extract Method"),
        (
            "description",
            case.description.starts_with("Extracted method generateImplementation") && case.description.contains(" from "),
        ),
        ("repository", case.repository == "https://github.com/gradle/gradle"),
        ("before.name", before.name == "loaderFor(Class)"),
        ("before.location.lines", before.location.lines == 167),
        ("before.location.file", before.location.file.ends_with(file_suffix)),
        ("after.name", after.name == "generateImplementationClassFor(Class)"),
        ("after.location.lines", after.location.lines == 97),
        ("after.location.file", after.location.file.ends_with(file_suffix)),
        ("commit.date", case.commit.date == "2022-03-17T17:07:34Z"),
        ("commit.message", case.commit.message == "Polish `NamedObjectInstantiator`"),
        ("commit.sha1", case.commit.sha1 == GRADLE_SHA),
        ("commit.size.files.changed", case.commit.size.files.changed == 2),
        ("commit.size.lines.inserted", case.commit.size.lines.inserted == 171),
        ("commit.size.lines.deleted", case.commit.size.lines.deleted == 175),
        ("commit.refactorings.total", case.commit.refactorings.total == 5),
        ("extractMethod.sourceMethodsCount", em.source_methods_count == 1),
        (
            "extractMethod lines",
            em.source_method_lines == 167 && em.extracted_lines == 97,
        ),
        ("meta.tool", case.meta.tool == "RefDiff"),
    ];
    let wrong: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(f, _)| *f).collect();
    ensure!(wrong.is_empty(), "wrong fields {wrong:?} in {case:?}");
    ensure!(!case.commit.author_name.is_empty(), "authorName missing");
    Ok(format!("{} field checks hold", checks.len() + 1))
}

fn id_set(store: &Store, text: &str) -> Result<BTreeSet<String>> {
    let ast = parse_query(text).with_context(|| text.to_owned())?;
    Ok(store.matching_ids(Some(&ast), &SortSpec::default(), false).into_iter().collect())
}

fn set_algebra() -> Result<String> {
    let docs = identified_corpus(31, 600);
    let store = load(&docs);
    let all: BTreeSet<String> = docs.iter().map(|d| d["id"].as_str().unwrap().to_owned()).collect();
    let queries = query_texts(32, 120);
    for pair in queries.chunks(2) {
        let (q1, q2) = (&pair[0], &pair[1]);
        let a = id_set(&store, q1)?;
        let b = id_set(&store, q2)?;
        let union: BTreeSet<_> = a.union(&b).cloned().collect();
        let both: BTreeSet<_> = a.intersection(&b).cloned().collect();
        ensure!(id_set(&store, &format!("({q1}) | ({q2})"))? == union, "union law fails for {q1} | {q2}");
        ensure!(id_set(&store, &format!("({q1}) & ({q2})"))? == both, "intersection law fails for {q1} & {q2}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let paths = ["type", "repository", "commit.sha1", "rename.from", "tags", "extractMethod.extractedLines", "score"];
    let mut laws = 0;
    for _ in 0..60 {
        let path = paths[rng.gen_range(0..paths.len())];
        let donor = &docs[rng.gen_range(0..docs.len())];
        let value = path.split('.').fold(donor, |v, k| &v[k]);
        let literal = match value {
            Value::String(s) => refsearch_core::query::quote(s),
            Value::Number(n) => n.to_string(),
            Value::Array(items) if !items.is_empty() => match &items[0] {
                Value::String(s) => refsearch_core::query::quote(s),
                other => other.to_string(),
            },
            _ => "\"absent\"".to_owned(),
        };
        let eq = id_set(&store, &format!("{path} = {literal}"))?;
        let neq = id_set(&store, &format!("{path} != {literal}"))?;
        let complement: BTreeSet<_> = all.difference(&eq).cloned().collect();
        ensure!(neq == complement, "complement law fails for {path} / {literal}");
        laws += 1;
    }
    Ok(format!("{} query pairs and {laws} complement checks over {} docs", queries.len() / 2, docs.len()))
}

fn idempotent_ingestion() -> Result<String> {
    let fixtures: [&[(&str, &str)]; 4] = [
        &[("refdiff", "gradle_refdiff.json")],
        &[("refactoringminer", "gradle_rminer.json")],
        &[("refdiff", "followup_refdiff.json")],
        &[
            ("refdiff", "gradle_refdiff.json"),
            ("refactoringminer", "gradle_rminer.json"),
            ("refdiff", "followup_refdiff.json"),
        ],
    ];
    let mut summary = Vec::new();
    for detectors in fixtures {
        let store = Store::open_in_memory();
        let first = ingest(&store, detectors)?;
        let count = store.len();
        ensure!(count > 0 && first.cases_stored == count, "first run stored {first:?}");
        let second = ingest(&store, detectors)?;
        ensure!(store.len() == count, "case count changed from {count} to {}", store.len());
        ensure!(second.cases_stored == 0, "second run stored {}", second.cases_stored);
        ensure!(
            second.cases_skipped_duplicate == first.cases_stored + first.cases_skipped_duplicate,
            "second run reported {} duplicates for {count} cases",
            second.cases_skipped_duplicate
        );
        summary.push(count.to_string());
    }
    Ok(format!("re-ingesting fixtures of {} cases stores nothing", summary.join("/")))
}

fn latency() -> Result<String> {
    const CORPUS: usize = 300_000;
    let start = Instant::now();
    let store = Store::open_in_memory();
    let mut cases = synthetic_cases(7, CORPUS);
    loop {
        let batch: Vec<_> = cases.by_ref().take(10_000).collect();
        if batch.is_empty() {
            break;
        }
        store.put_cases(&batch)?;
    }
    let generation = start.elapsed();
    ensure!(store.len() == CORPUS, "corpus has {} cases", store.len());
    let types = store.stats().counts_by_type.len();
    ensure!(types >= 10, "only {types} types");
    ensure!(generation <= Duration::from_secs(120), "generation took {generation:?}");

    let text = [RENAME_GET_RETRIEVE, MULTI_SOURCE_EXTRACT, LONG_SOURCE_EXTRACT, EXTRACT_MESSAGE].join("\n");
    let queries = parse_query_file(&text)?;
    let start = Instant::now();
    let report = run_bench(&store, &queries, 10)?;
    let bench_time = start.elapsed();
    ensure!(bench_time <= Duration::from_secs(60), "bench took {bench_time:?}");
    ensure!(report.results.len() == 4, "report has {} entries", report.results.len());

    let regex = &report.results[0];
    let indexed = &report.results[1..];
    for r in indexed {
        ensure!(r.plan.starts_with("IndexEq(type"), "{} planned as {}", r.query, r.plan);
        ensure!(r.median_ms <= 500.0, "{} median {:.1} ms", r.query, r.median_ms);
        ensure!(r.total > 0, "{} matched nothing", r.query);
    }
    ensure!(regex.total > 0, "regex query matched nothing");
    let slowest = indexed.iter().map(|r| r.median_ms).fold(0.0, f64::max);
    ensure!(
        regex.median_ms <= 5.0 * slowest,
        "regex median {:.1} ms exceeds 5x slowest indexed {slowest:.1} ms",
        regex.median_ms
    );
    ensure!(regex.median_ms <= 3000.0, "regex median {:.1} ms", regex.median_ms);
    let medians: Vec<String> = indexed.iter().map(|r| format!("{:.1}", r.median_ms)).collect();
    Ok(format!(
        "generated in {:.1}s; regex median {:.1} ms ({} hits); indexed medians [{}] ms; ratio {:.2}",
        generation.as_secs_f64(),
        regex.median_ms,
        regex.total,
        medians.join(", "),
        regex.median_ms / slowest
    ))
}

fn pagination() -> Result<String> {
    let docs = identified_corpus(41, 1000);
    let store = load(&docs);
    let mut texts: Vec<Option<String>> = vec![None];
    texts.extend(query_texts(42, 40).into_iter().map(Some));
    let mut pages_read = 0;
    for (i, text) in texts.iter().enumerate() {
        let (sort_text, field, descending) = ORDER_FIELDS[i % ORDER_FIELDS.len()];
        let ast = text.as_deref().map(parse_query).transpose()?;
        let matches = match text {
            Some(t) => oracle_filter(t, &docs).map_err(|e| anyhow::anyhow!("{e}"))?,
            None => (0..docs.len()).collect(),
        };
        let expected = oracle_ids(&docs, &matches, field, descending);
        let mut collected = Vec::new();
        let mut offset = 0;
        loop {
            let options = SearchOptions {
                offset,
                limit: 20,
                sort: sort_text.parse().unwrap(),
                force_full_scan: false,
            };
            let page = store.search(ast.as_ref(), &options)?;
            pages_read += 1;
            ensure!(page.total == expected.len(), "total {} != {} for {text:?}", page.total, expected.len());
            if page.items.is_empty() {
                break;
            }
            ensure!(page.items.len() <= 20, "page larger than the limit");
            collected.extend(page.items.into_iter().map(|c| c.id));
            offset += 20;
        }
        ensure!(collected == expected, "pages do not concatenate to the result list for {text:?}");
    }
    Ok(format!("{} queries, {pages_read} pages of 20", texts.len()))
}

fn encode(q: &str) -> String {
    q.bytes()
        .map(|b| match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' => (b as char).to_string(),
            _ => format!("%{b:02X}"),
        })
        .collect()
}

fn refsearch(data: &Path, args: &[String]) -> Result<std::process::Output> {
    Command::new(env!("CARGO_BIN_EXE_refsearch"))
        .arg("--data-dir")
        .arg(data)
        .args(args)
        .env_remove("REFSEARCH_DATA_DIR")
        .output()
        .context("cannot run refsearch")
}

fn api_cli_parity() -> Result<String> {
    let data = tempfile::tempdir()?;
    let out = refsearch(data.path(), &["synth".into(), "--count".into(), "3000".into(), "--seed".into(), "5".into()])?;
    ensure!(out.status.success(), "synth failed: {}", String::from_utf8_lossy(&out.stderr));
    let out = refsearch(
        data.path(),
        &[
            "ingest".into(),
            "--repo".into(),
            "https://github.com/gradle/gradle".into(),
            "--refdiff-json".into(),
            fixture("gradle_refdiff.json").display().to_string(),
            "--commits-jsonl".into(),
            fixture("gradle_commits.jsonl").display().to_string(),
        ],
    )?;
    ensure!(out.status.success(), "ingest failed: {}", String::from_utf8_lossy(&out.stderr));

    let store = Store::open(data.path().join("store"))?;
    let app = router(AppState::new(store, JobRegistry::in_memory()), &ApiConfig::default());
    let runtime = tokio::runtime::Runtime::new()?;

    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let sorts = ["commit.date:desc", "commit.date:asc", "type", "repository:desc", "extractMethod.extractedLines:desc"];
    let fixed = [RENAME_GET_RETRIEVE, MULTI_SOURCE_EXTRACT, LONG_SOURCE_EXTRACT, EXTRACT_MESSAGE, LONG_EXTRACTED];
    let mut nonempty = 0;
    for i in 0..20 {
        let q = match i {
            0 => None,
            1..=5 => Some(fixed[i - 1].to_owned()),
            _ => Some(query_text(&mut rng)),
        };
        let offset = rng.gen_bool(0.6).then(|| rng.gen_range(0..40i64));
        let limit = rng.gen_bool(0.7).then(|| rng.gen_range(1..=60i64));
        let sort = rng.gen_bool(0.6).then(|| sorts[rng.gen_range(0..sorts.len())]);

        let mut query = Vec::new();
        let mut args = vec!["search".to_owned(), q.clone().unwrap_or_default(), "--format".into(), "json".into()];
        if let Some(q) = &q {
            query.push(format!("q={}", encode(q)));
        }
        if let Some(o) = offset {
            query.push(format!("offset={o}"));
            args.extend(["--offset".into(), o.to_string()]);
        }
        if let Some(l) = limit {
            query.push(format!("limit={l}"));
            args.extend(["--limit".into(), l.to_string()]);
        }
        if let Some(s) = sort {
            query.push(format!("sort={}", encode(s)));
            args.extend(["--sort".into(), s.to_owned()]);
        }
        let uri = format!("/api/refactorings?{}", query.join("&"));
        let (status, body) = runtime.block_on(async {
            let response = app.clone().oneshot(Request::get(&uri).body(Body::empty())?).await?;
            let status = response.status();
            let bytes = to_bytes(response.into_body(), usize::MAX).await?;
            anyhow::Ok((status, bytes))
        })?;
        if status != StatusCode::OK {
            bail!("{uri} returned {status}: {}", String::from_utf8_lossy(&body));
        }
        let api: Value = serde_json::from_slice(&body)?;
        let out = refsearch(data.path(), &args)?;
        ensure!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
        let cli: Value = serde_json::from_slice(&out.stdout)?;
        ensure!(api == cli, "API and CLI differ for {uri}");
        nonempty += usize::from(api["items"].as_array().is_some_and(|a| !a.is_empty()));
    }
    ensure!(nonempty >= 10, "only {nonempty} parameter sets returned items");
    Ok(format!("20 parameter sets identical ({nonempty} with items)"))
}
