//! Query latency measurement against a loaded store.

use std::time::Instant;

use serde::Serialize;

use crate::query::{parse_query, ParseError, QueryAst};
use crate::store::{SearchOptions, Store, StoreError};

pub const DEFAULT_REPEAT: usize = 10;

/// A query read from a query file, with its 1-based line number.
#[derive(Debug, Clone)]
pub struct BenchQuery {
    pub line: usize,
    pub text: String,
    pub ast: QueryAst,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("line {line}: {error}")]
    Parse { line: usize, error: ParseError },
    #[error("repeat must be at least 1")]
    NoRepeat,
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// One query per line. Blank lines and lines starting with `#` are skipped.
pub fn parse_query_file(text: &str) -> Result<Vec<BenchQuery>, BenchError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            let text = l.trim().to_owned();
            parse_query(&text)
                .map(|ast| BenchQuery {
                    line: i + 1,
                    text,
                    ast,
                })
                .map_err(|error| BenchError::Parse { line: i + 1, error })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchResult {
    pub query: String,
    pub plan: String,
    pub total: usize,
    pub samples_ms: Vec<f64>,
    pub min_ms: f64,
    pub median_ms: f64,
    pub max_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchReport {
    pub case_count: usize,
    pub repeat: usize,
    pub results: Vec<BenchResult>,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Runs each query once to warm up, then `repeat` timed first-page
/// searches with default options.
pub fn run_bench(store: &Store, queries: &[BenchQuery], repeat: usize) -> Result<BenchReport, BenchError> {
    if repeat == 0 {
        return Err(BenchError::NoRepeat);
    }
    let options = SearchOptions::default();
    let mut results = Vec::with_capacity(queries.len());
    for query in queries {
        let total = store.search(Some(&query.ast), &options)?.total;
        let mut samples = Vec::with_capacity(repeat);
        for _ in 0..repeat {
            let start = Instant::now();
            let page = store.search(Some(&query.ast), &options)?;
            samples.push(start.elapsed().as_secs_f64() * 1000.0);
            std::hint::black_box(page);
        }
        let mut sorted = samples.clone();
        sorted.sort_by(f64::total_cmp);
        results.push(BenchResult {
            query: query.text.clone(),
            plan: store.plan(Some(&query.ast)).access.to_string(),
            total,
            min_ms: sorted[0],
            median_ms: median(&sorted),
            max_ms: sorted[sorted.len() - 1],
            samples_ms: samples,
        });
    }
    Ok(BenchReport {
        case_count: store.len(),
        repeat,
        results,
    })
}
