//! HTTP service for playing the coin-collector game with logic-network
//! recommendations.
//!
//! All endpoints speak JSON; failures use `{"error": {"code", "message"}}`.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::routing::{get, post};
use axum::{Json, Router};
use tower_http::services::ServeDir;

pub mod error;
pub mod runs;
pub mod session;

pub use error::{ApiError, ErrorBody, ErrorCode, ErrorEnvelope};
pub use runs::{RunDetail, RunList, RunSummary};
pub use session::{
    catalog, CreatePayload, CreateRequest, GameCatalog, GameInfo, HistoryEntry, LayoutChoice, Session, SessionStore,
    SessionView, StepPayload, StepRequest, DEFAULT_TTL, GAME_ID,
};

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub ui_dir: Option<PathBuf>,
    pub runs_dir: Option<PathBuf>,
    pub session_ttl: Duration,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { ui_dir: None, runs_dir: None, session_ttl: DEFAULT_TTL }
    }
}

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<SessionStore>,
    pub runs_dir: Option<PathBuf>,
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    payload.map(|Json(v)| v).map_err(|e| ApiError::bad_request(e.body_text()))
}

async fn create_session(
    State(app): State<AppState>,
    payload: Result<Json<CreateRequest>, JsonRejection>,
) -> ApiResult<CreatePayload> {
    let req = body(payload)?;
    app.store.create(&req).map(Json)
}

async fn step_session(
    State(app): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<StepRequest>, JsonRejection>,
) -> ApiResult<StepPayload> {
    let req = body(payload)?;
    let session = app.store.get(&id)?;
    let mut guard =
        session.try_lock().map_err(|_| ApiError::new(ErrorCode::SessionBusy, "another step is in progress"))?;
    guard.step(&req.command).map(Json)
}

async fn get_session(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<SessionView> {
    let session = app.store.get(&id)?;
    let guard = session.lock().await;
    Ok(Json(guard.view()))
}

async fn get_lnn(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<loa_core::lnn::Snapshot> {
    let session = app.store.get(&id)?;
    let guard = session.lock().await;
    Ok(Json(guard.snapshot().clone()))
}

async fn list_games() -> Json<GameCatalog> {
    Json(catalog())
}

async fn list_runs(State(app): State<AppState>) -> Json<RunList> {
    Json(runs::list_runs(app.runs_dir.as_ref()))
}

async fn get_run(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<RunDetail> {
    runs::get_run(app.runs_dir.as_ref(), &id).map(Json)
}

async fn not_found() -> ApiError {
    ApiError::new(ErrorCode::NotFound, "no such endpoint")
}

/// Builds the router together with the store it serves from.
pub fn app_with_store(config: &ServerConfig) -> (Router, Arc<SessionStore>) {
    let store = Arc::new(SessionStore::new(config.session_ttl));
    let state = AppState { store: store.clone(), runs_dir: config.runs_dir.clone() };
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/step", post(step_session))
        .route("/sessions/{id}/lnn", get(get_lnn))
        .route("/games", get(list_games))
        .route("/runs", get(list_runs))
        .route("/runs/{id}", get(get_run))
        .fallback(not_found)
        .with_state(state);
    let mut router = Router::new().nest("/api", api);
    if let Some(dir) = &config.ui_dir {
        router = router.fallback_service(ServeDir::new(dir).append_index_html_on_directories(true));
    }
    (router, store)
}

pub fn app(config: &ServerConfig) -> Router {
    app_with_store(config).0
}

/// Binds `addr` and serves until the process is stopped. Idle sessions are
/// swept once a minute.
pub async fn serve(config: ServerConfig, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    serve_on(config, listener).await
}

pub async fn serve_on(config: ServerConfig, listener: tokio::net::TcpListener) -> std::io::Result<()> {
    let (router, store) = app_with_store(&config);
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            store.evict_idle(Instant::now());
        }
    });
    axum::serve(listener, router).await
}
