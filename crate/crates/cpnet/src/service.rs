//! HTTP service hosting elicitation sessions.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use cpnet_core::SwapInstance;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as JsonValue};

use crate::dot::dependency_dot;
use crate::formats::{net_to_json, NetJson};
use crate::session::{ElicitationSession, HumanAnswer, SessionConfig, SessionError, SessionRecord, Status};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub data_dir: Option<PathBuf>,
    pub session_timeout: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { data_dir: None, session_timeout: Duration::from_secs(3600) }
    }
}

pub struct AppState {
    sessions: Mutex<HashMap<String, ElicitationSession>>,
    config: ServiceConfig,
}

pub type SharedState = Arc<AppState>;

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

impl AppState {
    /// Creates the state and reloads every session stored in the data directory.
    pub fn load(config: ServiceConfig) -> std::io::Result<SharedState> {
        let mut sessions = HashMap::new();
        if let Some(dir) = &config.data_dir {
            std::fs::create_dir_all(dir)?;
            for entry in std::fs::read_dir(dir)? {
                let path = entry?.path();
                if path.extension().and_then(|e| e.to_str()) != Some("json") {
                    continue;
                }
                let record: SessionRecord = match std::fs::read_to_string(&path).map(|t| serde_json::from_str(&t)) {
                    Ok(Ok(r)) => r,
                    _ => continue,
                };
                if let Ok(s) = ElicitationSession::from_record(record) {
                    sessions.insert(s.id.clone(), s);
                }
            }
        }
        Ok(Arc::new(AppState { sessions: Mutex::new(sessions), config }))
    }

    fn persist(&self, s: &ElicitationSession) -> Result<(), ApiError> {
        let Some(dir) = &self.config.data_dir else { return Ok(()) };
        write_record(dir, &s.record()).map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
    }

    fn expire(&self, sessions: &mut HashMap<String, ElicitationSession>) {
        let now = now();
        for s in sessions.values_mut() {
            if s.status() == Status::AwaitingAnswer && s.updated.saturating_add(self.config.session_timeout.as_secs()) <= now {
                s.abort();
                let _ = self.persist(s);
            }
        }
    }
}

fn write_record(dir: &Path, record: &SessionRecord) -> std::io::Result<()> {
    let path = dir.join(format!("{}.json", record.id));
    let tmp = dir.join(format!("{}.json.tmp", record.id));
    std::fs::write(&tmp, serde_json::to_vec_pretty(record)?)?;
    std::fs::rename(tmp, path)
}

#[derive(Debug)]
pub struct ApiError(pub StatusCode, pub String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let code = match e {
            SessionError::Invalid(_) => StatusCode::BAD_REQUEST,
            SessionError::NotAwaiting => StatusCode::CONFLICT,
            SessionError::UnknownNotAllowed => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError(code, e.to_string())
    }
}

fn not_found(id: &str) -> ApiError {
    ApiError(StatusCode::NOT_FOUND, format!("no session {id}"))
}

/// A pending query as shown to a person.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryView {
    pub first: Vec<u8>,
    pub second: Vec<u8>,
    pub swapped: usize,
    pub attributes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_names: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub second_names: Option<Vec<String>>,
}

fn query_view(s: &ElicitationSession, x: &SwapInstance) -> QueryView {
    let names = |o: &[u8]| s.value_names().map(|v| o.iter().enumerate().map(|(i, &d)| v[i][d as usize].clone()).collect());
    QueryView {
        first: x.first().values().to_vec(),
        second: x.second().values().to_vec(),
        swapped: x.swapped(),
        attributes: s.attribute_names(),
        first_names: names(x.first().values()),
        second_names: names(x.second().values()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub status: Status,
    pub answered: usize,
    pub allows_unknown: bool,
    pub query: Option<QueryView>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub net: Option<NetJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

fn view(s: &ElicitationSession) -> SessionView {
    SessionView {
        id: s.id.clone(),
        status: s.status(),
        answered: s.history().len(),
        allows_unknown: s.allows_unknown(),
        query: s.pending().map(|x| query_view(s, x)),
        net: s.result().map(net_to_json),
        error: s.failure().map(str::to_string),
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct AnswerRequest {
    pub answer: HumanAnswer,
    /// Number of answers the client had seen; a stale value is rejected as a duplicate.
    #[serde(default)]
    pub seq: Option<usize>,
}

async fn create(State(state): State<SharedState>, Json(config): Json<SessionConfig>) -> Result<impl IntoResponse, ApiError> {
    let id = uuid::Uuid::new_v4().to_string();
    let session = ElicitationSession::new(id.clone(), config, now())?;
    state.persist(&session)?;
    let body = view(&session);
    state.sessions.lock().expect("session lock").insert(id, session);
    Ok((StatusCode::CREATED, Json(body)))
}

async fn status(State(state): State<SharedState>, UrlPath(id): UrlPath<String>) -> Result<Json<SessionView>, ApiError> {
    let mut sessions = state.sessions.lock().expect("session lock");
    state.expire(&mut sessions);
    let s = sessions.get(&id).ok_or_else(|| not_found(&id))?;
    Ok(Json(view(s)))
}

async fn answer(
    State(state): State<SharedState>,
    UrlPath(id): UrlPath<String>,
    Json(req): Json<AnswerRequest>,
) -> Result<Json<SessionView>, ApiError> {
    let mut sessions = state.sessions.lock().expect("session lock");
    state.expire(&mut sessions);
    let s = sessions.get_mut(&id).ok_or_else(|| not_found(&id))?;
    if req.seq.is_some_and(|seq| seq != s.history().len()) {
        return Err(ApiError(StatusCode::CONFLICT, "answer does not match the pending query".into()));
    }
    s.answer(req.answer, now())?;
    state.persist(s)?;
    Ok(Json(view(s)))
}

async fn model(State(state): State<SharedState>, UrlPath(id): UrlPath<String>) -> Result<Json<JsonValue>, ApiError> {
    let sessions = state.sessions.lock().expect("session lock");
    let s = sessions.get(&id).ok_or_else(|| not_found(&id))?;
    let net = s.result().ok_or_else(|| ApiError(StatusCode::CONFLICT, "the session has not finished".into()))?;
    let names = s.attribute_names();
    Ok(Json(json!({ "net": net_to_json(net), "dot": dependency_dot(net, Some(&names)) })))
}

async fn abort(State(state): State<SharedState>, UrlPath(id): UrlPath<String>) -> Result<Json<SessionView>, ApiError> {
    let mut sessions = state.sessions.lock().expect("session lock");
    let s = sessions.get_mut(&id).ok_or_else(|| not_found(&id))?;
    s.abort();
    state.persist(s)?;
    Ok(Json(view(s)))
}

pub fn router(state: SharedState) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(status).delete(abort))
        .route("/sessions/{id}/answer", post(answer))
        .route("/sessions/{id}/model", get(model))
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let state = AppState::load(config)?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}
