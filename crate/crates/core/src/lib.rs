//! Core of a search engine for refactoring cases mined from version
//! history: the query language, document evaluation, the case model,
//! ingestion of detector output, and an indexed document store.

pub mod bench;
pub mod eval;
pub mod ingest;
pub mod model;
pub mod query;
pub mod store;
pub mod synth;
