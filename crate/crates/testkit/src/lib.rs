//! Reference implementations and random inputs for testing the search
//! engine. Nothing here depends on the engine itself: the oracle reads
//! query text and JSON documents directly.

pub mod gen;
pub mod oracle;

pub use oracle::{oracle_matches, OracleError};
