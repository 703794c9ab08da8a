use refsearch_core::query::parse_query;
use refsearch_core::store::{SearchOptions, SearchPage, SortSpec, Store, DEFAULT_LIMIT, MAX_LIMIT};

use crate::ApiError;

/// Search parameters before validation. Signed numbers so that negative
/// input can be reported instead of failing to decode.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchParams {
    pub q: Option<String>,
    pub offset: Option<i64>,
    pub limit: Option<i64>,
    pub sort: Option<String>,
}

/// Validates `params` and runs the search. A missing or blank query
/// matches every case.
pub fn search(store: &Store, params: &SearchParams) -> Result<SearchPage, ApiError> {
    let offset = params.offset.unwrap_or(0);
    if offset < 0 {
        return Err(ApiError::bad_request(format!("offset must not be negative, got {offset}")));
    }
    let limit = params.limit.unwrap_or(DEFAULT_LIMIT as i64);
    if !(0..=MAX_LIMIT as i64).contains(&limit) {
        return Err(ApiError::bad_request(format!(
            "limit must be between 0 and {MAX_LIMIT}, got {limit}"
        )));
    }
    let sort = match params.sort.as_deref() {
        None | Some("") => SortSpec::default(),
        Some(text) => text
            .parse()
            .map_err(|e| ApiError::bad_request(format!("invalid sort: {e}")))?,
    };
    let ast = match params.q.as_deref() {
        Some(q) if !q.trim().is_empty() => Some(parse_query(q)?),
        _ => None,
    };
    let options = SearchOptions {
        offset: offset as usize,
        limit: limit as usize,
        sort,
        force_full_scan: false,
    };
    Ok(store.search(ast.as_ref(), &options)?)
}
