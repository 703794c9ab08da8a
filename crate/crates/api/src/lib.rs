//! HTTP/JSON service over a case store and an ingestion job registry.

mod error;
mod search;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::IntoResponse;
use axum::routing::get;
use axum::{Json, Router};
use serde::Serialize;
use serde_json::Value;
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

use refsearch_core::ingest::{run_job, IngestJob, JobRegistry, JobRequest};
use refsearch_core::model::{commit_url, to_json};
use refsearch_core::store::{SearchPage, StoreStats, Store};

pub use error::{ApiError, ErrorCode};
pub use search::{search, SearchParams};

pub const DEFAULT_PORT: u16 = 7364;

#[derive(Debug, Clone, Default)]
pub struct ApiConfig {
    /// Origin allowed to call the API from a browser; `*` allows any.
    pub cors_origin: Option<String>,
    /// Static bundle served at `/`.
    pub ui_dir: Option<PathBuf>,
}

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub jobs: Arc<JobRegistry>,
}

impl AppState {
    pub fn new(store: Store, jobs: JobRegistry) -> Self {
        AppState {
            store: Arc::new(store),
            jobs: Arc::new(jobs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeCount {
    #[serde(rename = "type")]
    pub refactoring_type: String,
    pub count: usize,
}

pub fn router(state: AppState, config: &ApiConfig) -> Router {
    let api = Router::new()
        .route("/refactorings", get(list_refactorings))
        .route("/refactorings/{id}", get(get_refactoring))
        .route("/meta/types", get(meta_types))
        .route("/stats", get(stats))
        .route("/jobs", get(list_jobs).post(submit_job))
        .route("/jobs/{id}", get(get_job))
        .fallback(|| async { ApiError::not_found("no such endpoint") });
    let mut app = Router::new().nest("/api", api).with_state(state);
    if let Some(dir) = &config.ui_dir {
        app = app.fallback_service(ServeDir::new(dir).append_index_html_on_directories(true));
    }
    if let Some(origin) = &config.cors_origin {
        let allow = if origin == "*" {
            AllowOrigin::any()
        } else {
            match HeaderValue::from_str(origin) {
                Ok(value) => AllowOrigin::exact(value),
                Err(_) => {
                    tracing::warn!(origin, "ignoring unusable CORS origin");
                    return app;
                }
            }
        };
        app = app.layer(
            CorsLayer::new()
                .allow_origin(allow)
                .allow_methods([Method::GET, Method::POST])
                .allow_headers([header::CONTENT_TYPE]),
        );
    }
    app
}

/// Serves `app` until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

fn int_param(params: &HashMap<String, String>, name: &str) -> Result<Option<i64>, ApiError> {
    params
        .get(name)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| ApiError::bad_request(format!("{name} must be an integer, got {v:?}")))
        })
        .transpose()
}

async fn list_refactorings(
    State(state): State<AppState>,
    Query(raw): Query<HashMap<String, String>>,
) -> Result<Json<SearchPage>, ApiError> {
    let params = SearchParams {
        q: raw.get("q").cloned(),
        offset: int_param(&raw, "offset")?,
        limit: int_param(&raw, "limit")?,
        sort: raw.get("sort").cloned(),
    };
    let store = state.store.clone();
    tokio::task::spawn_blocking(move || search(&store, &params))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?
        .map(Json)
}

async fn get_refactoring(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let case = state
        .store
        .get_case(&id)
        .ok_or_else(|| ApiError::not_found(format!("no case with id {id}")))?;
    let mut doc = to_json(&case);
    if let (Some(url), Some(map)) = (commit_url(&case), doc.as_object_mut()) {
        map.insert("commitUrl".into(), Value::String(url));
    }
    Ok(Json(doc))
}

async fn meta_types(State(state): State<AppState>) -> Json<Vec<TypeCount>> {
    let types = state
        .store
        .stats()
        .counts_by_type
        .into_iter()
        .map(|(refactoring_type, count)| TypeCount {
            refactoring_type,
            count,
        })
        .collect();
    Json(types)
}

async fn stats(State(state): State<AppState>) -> Json<StoreStats> {
    Json(state.store.stats())
}

async fn list_jobs(State(state): State<AppState>) -> Json<Vec<IngestJob>> {
    Json(state.jobs.list())
}

async fn get_job(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<IngestJob>, ApiError> {
    state
        .jobs
        .get(&id)
        .map(Json)
        .ok_or_else(|| ApiError::not_found(format!("no job with id {id}")))
}

async fn submit_job(State(state): State<AppState>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let request: JobRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(format!("invalid job request: {e}")))?;
    if request.repository_url.trim().is_empty() {
        return Err(ApiError::bad_request("repositoryUrl is required"));
    }
    if request.detector_inputs.is_empty() {
        return Err(ApiError::bad_request("detectorInputs must not be empty"));
    }
    let handle = state.jobs.create(&request);
    let accepted = handle.snapshot();
    let store = state.store.clone();
    tokio::task::spawn_blocking(move || {
        let job = run_job(&store, &request, &handle);
        tracing::info!(job = %job.job_id, status = ?job.status, "ingestion job finished");
    });
    Ok((StatusCode::ACCEPTED, Json(accepted)))
}
