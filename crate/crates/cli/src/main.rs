mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Search engine for refactoring cases mined from Git history.
#[derive(Debug, Parser)]
#[command(name = "refsearch", version)]
pub struct Cli {
    /// Directory holding the case store and job records.
    #[arg(long, global = true, env = "REFSEARCH_DATA_DIR", default_value = "refsearch-data")]
    pub data_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ingest detector output for one repository.
    Ingest(IngestArgs),
    /// Run a query and print the matching cases.
    Search(SearchArgs),
    /// Serve the HTTP API (and optionally a UI bundle).
    Serve(ServeArgs),
    /// Time queries from a file against the store.
    Bench(BenchArgs),
    /// Print corpus statistics.
    Stats,
    /// Index maintenance.
    Index {
        #[command(subcommand)]
        action: IndexAction,
    },
    /// Write every case as one JSON document per line.
    Export {
        #[arg(long, env = "REFSEARCH_OUT")]
        out: PathBuf,
    },
    /// Load cases from a JSONL export.
    Import {
        #[arg(long = "in", env = "REFSEARCH_IN")]
        input: PathBuf,
    },
    /// Fill the store with a deterministic synthetic corpus.
    Synth(SynthArgs),
}

#[derive(Debug, Subcommand)]
pub enum IndexAction {
    /// Rebuild every secondary index from the stored cases.
    Rebuild,
}

#[derive(Debug, clap::Args)]
pub struct IngestArgs {
    /// Repository URL the cases belong to.
    #[arg(long, env = "REFSEARCH_REPO")]
    pub repo: String,
    /// RefactoringMiner JSON output (repeatable).
    #[arg(long, env = "REFSEARCH_RMINER_JSON", value_delimiter = ',')]
    pub rminer_json: Vec<PathBuf>,
    /// RefDiff JSON output (repeatable).
    #[arg(long, env = "REFSEARCH_REFDIFF_JSON", value_delimiter = ',')]
    pub refdiff_json: Vec<PathBuf>,
    /// Commit metadata as JSON lines.
    #[arg(long, env = "REFSEARCH_COMMITS_JSONL", conflicts_with = "clone_path")]
    pub commits_jsonl: Option<PathBuf>,
    /// Local clone to read commit metadata from and to run detectors in.
    #[arg(long, env = "REFSEARCH_CLONE_PATH")]
    pub clone_path: Option<PathBuf>,
    /// `tool=command` run through the shell; `{repo}` expands to the clone path.
    #[arg(long, env = "REFSEARCH_DETECTOR_CMD", value_delimiter = ';')]
    pub detector_cmd: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, clap::Args)]
pub struct SearchArgs {
    /// Query text; an empty string matches every case.
    pub query: String,
    #[arg(long, env = "REFSEARCH_LIMIT", allow_negative_numbers = true)]
    pub limit: Option<i64>,
    #[arg(long, env = "REFSEARCH_OFFSET", allow_negative_numbers = true)]
    pub offset: Option<i64>,
    /// `path[:asc|desc]`, default `commit.date:desc`.
    #[arg(long, env = "REFSEARCH_SORT")]
    pub sort: Option<String>,
    #[arg(long, env = "REFSEARCH_FORMAT", value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Debug, clap::Args)]
pub struct ServeArgs {
    #[arg(long, env = "REFSEARCH_PORT", default_value_t = refsearch_api::DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, env = "REFSEARCH_HOST", default_value = "127.0.0.1")]
    pub host: String,
    /// Static UI bundle served at `/`.
    #[arg(long, env = "REFSEARCH_UI_DIR")]
    pub ui_dir: Option<PathBuf>,
    /// Browser origin allowed to call the API.
    #[arg(long, env = "REFSEARCH_CORS_ORIGIN")]
    pub cors_origin: Option<String>,
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    /// One query per line; `#` starts a comment line.
    #[arg(long, env = "REFSEARCH_QUERIES")]
    pub queries: PathBuf,
    #[arg(long, env = "REFSEARCH_REPEAT", default_value_t = refsearch_core::bench::DEFAULT_REPEAT)]
    pub repeat: usize,
    /// Benchmark an in-memory synthetic corpus of this size instead of the store.
    #[arg(long, env = "REFSEARCH_SYNTHETIC")]
    pub synthetic: Option<usize>,
    #[arg(long, env = "REFSEARCH_SEED", default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, clap::Args)]
pub struct SynthArgs {
    #[arg(long, env = "REFSEARCH_COUNT", default_value_t = 300_000)]
    pub count: usize,
    #[arg(long, env = "REFSEARCH_SEED", default_value_t = 7)]
    pub seed: u64,
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_env("REFSEARCH_LOG")
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("warn")),
        )
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    commands::run(cli)
}
