//! Local HTTP/JSON API over one person's mailbox.
//!
//! The index is built once, off the request path; until it is installed every
//! data endpoint answers 503. After that all responses are pure reads of the
//! same immutable [`PersonalIndex`].

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use mailmood_core::tracking::{check_anonymous_export, Demographics, PersonalIndex, TrackingError};
use serde::Serialize;
use thiserror::Error;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

#[derive(Debug, Error)]
pub enum DashboardError {
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
    #[error("server error: {0}")]
    Serve(#[from] std::io::Error),
}

pub struct AppState {
    index: OnceLock<Arc<PersonalIndex>>,
    demographics: Demographics,
}

impl AppState {
    pub fn new(demographics: Demographics) -> Arc<Self> {
        Arc::new(AppState {
            index: OnceLock::new(),
            demographics,
        })
    }

    /// State with the index already in place.
    pub fn ready(index: PersonalIndex, demographics: Demographics) -> Arc<Self> {
        let state = Self::new(demographics);
        state.install(index);
        state
    }

    /// Publishes the index. Only the first call has an effect.
    pub fn install(&self, index: PersonalIndex) {
        let _ = self.index.set(Arc::new(index));
    }

    pub fn is_ready(&self) -> bool {
        self.index.get().is_some()
    }

    fn index(&self) -> Result<&Arc<PersonalIndex>, ApiError> {
        self.index.get().ok_or(ApiError::NotReady)
    }
}

enum ApiError {
    NotReady,
    Tracking(TrackingError),
    Privacy(String),
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    suggestions: Vec<String>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::NotReady => (
                StatusCode::SERVICE_UNAVAILABLE,
                ErrorBody {
                    error: "mailbox index is still being built".into(),
                    suggestions: vec![],
                },
            ),
            ApiError::Tracking(e) => {
                let TrackingError::UnknownAddress { ref suggestions, .. } = e;
                (
                    StatusCode::NOT_FOUND,
                    ErrorBody {
                        suggestions: suggestions.clone(),
                        error: e.to_string(),
                    },
                )
            }
            ApiError::Privacy(msg) => (
                StatusCode::INTERNAL_SERVER_ERROR,
                ErrorBody {
                    error: msg,
                    suggestions: vec![],
                },
            ),
        };
        (status, Json(body)).into_response()
    }
}

#[derive(Serialize)]
struct Health {
    status: &'static str,
    ready: bool,
}

async fn health(State(state): State<Arc<AppState>>) -> Json<Health> {
    Json(Health {
        status: "ok",
        ready: state.is_ready(),
    })
}

async fn summary(State(state): State<Arc<AppState>>) -> Result<Response, ApiError> {
    Ok(Json(state.index()?.summaries()).into_response())
}

async fn correspondent(State(state): State<Arc<AppState>>, Path(address): Path<String>) -> Result<Response, ApiError> {
    let s = state.index()?.correspondent(&address).map_err(ApiError::Tracking)?;
    Ok(Json(s).into_response())
}

async fn timeline(State(state): State<Arc<AppState>>, Path(address): Path<String>) -> Result<Response, ApiError> {
    let t = state.index()?.timeline(&address).map_err(ApiError::Tracking)?;
    Ok(Json(t).into_response())
}

async fn export_anonymous(State(state): State<Arc<AppState>>) -> Result<Response, ApiError> {
    let export = state.index()?.anonymous_export(state.demographics);
    let value = serde_json::to_value(&export).map_err(|e| ApiError::Privacy(e.to_string()))?;
    check_anonymous_export(&value).map_err(|e| ApiError::Privacy(e.to_string()))?;
    Ok(Json(value).into_response())
}

const PLACEHOLDER: &str = "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>mailmood</title></head>\n<body><p>mailmood dashboard API. Endpoints: <code>/api/health</code>, <code>/api/mailbox/summary</code>, <code>/api/correspondent/{address}</code>, <code>/api/correspondent/{address}/timeline</code>, <code>/api/export/anonymous</code>.</p></body></html>\n";

/// API routes, plus the web UI bundle under `/` when `static_dir` is given.
pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/mailbox/summary", get(summary))
        .route("/api/correspondent/{address}", get(correspondent))
        .route("/api/correspondent/{address}/timeline", get(timeline))
        .route("/api/export/anonymous", get(export_anonymous))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(PLACEHOLDER) })),
    }
}

pub async fn bind(addr: SocketAddr) -> Result<TcpListener, DashboardError> {
    TcpListener::bind(addr)
        .await
        .map_err(|source| DashboardError::Bind { addr, source })
}

/// Serves on `listener` while `build` runs on a blocking thread; the index is
/// installed atomically once `build` returns.
pub async fn run<F>(
    listener: TcpListener,
    state: Arc<AppState>,
    static_dir: Option<PathBuf>,
    build: F,
) -> Result<(), DashboardError>
where
    F: FnOnce() -> PersonalIndex + Send + 'static,
{
    let builder = state.clone();
    tokio::task::spawn_blocking(move || {
        let index = build();
        tracing::info!(correspondents = index.summaries().len(), "mailbox index ready");
        builder.install(index);
    });
    axum::serve(listener, router(state, static_dir)).await?;
    Ok(())
}
