//! Local HTTP/JSON service for playing against a Cyclone agent.
//!
//! | method | path | body | reply |
//! |---|---|---|---|
//! | POST | `/v1/sessions` | [`CreateSession`] | 201 [`SessionView`] |
//! | GET | `/v1/sessions/{id}` | | [`SessionView`] |
//! | POST | `/v1/sessions/{id}/actions` | [`ActionInput`] | [`SessionView`] |
//! | POST | `/v1/sessions/{id}/end` | | [`EndReport`] |
//! | GET | `/v1/presets` | | list of [`PresetInfo`] |
//!
//! Errors come back as `{"error": {"code", "message"}}` with 400 (malformed
//! request), 404 (unknown session), 409 (wrong turn or finished game) or
//! 422 (illegal move, code from the engine).
//!
//! The agent replies inside the same request, so every response ends on the
//! human's turn or at the end of the game.

mod dto;
mod error;
mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use cyclone_core::decision::{DecisionError, Preset};
use cyclone_core::engine::RulesConfig;
use tower_http::cors::CorsLayer;

pub use dto::{
    ActionInput, AgentCard, CreateSession, EndReport, HumanView, PresetInfo, SessionStatus, SessionView, SCHEMA,
};
pub use error::ApiError;
pub use session::Session;

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    /// Sessions created without a seed use `seed_base + n` for the n-th session (from 0).
    /// With a capture dir, ids (and so `n`) skip past capture files left by earlier runs.
    pub seed_base: u64,
    /// When set, every session writes its log and decisions here after each move.
    pub capture_dir: Option<PathBuf>,
    pub rules: RulesConfig,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { seed_base: 1, capture_dir: None, rules: RulesConfig::default() }
    }
}

struct Registry {
    sessions: HashMap<String, Arc<Mutex<Session>>>,
    created: u64,
}

pub struct App {
    config: ServiceConfig,
    registry: Mutex<Registry>,
}

type Shared = Arc<App>;

impl App {
    pub fn new(config: ServiceConfig) -> Shared {
        Arc::new(App { config, registry: Mutex::new(Registry { sessions: HashMap::new(), created: 0 }) })
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let reg = self.registry.lock().expect("registry lock");
        reg.sessions.get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }

    fn persist(&self, s: &Session) -> Result<(), ApiError> {
        let Some(dir) = &self.config.capture_dir else { return Ok(()) };
        if !s.capture() {
            return Ok(());
        }
        let db = s.decisions().map_err(ApiError::internal)?;
        let write = |name: String, text: String| {
            let tmp = dir.join(format!("{name}.tmp"));
            std::fs::write(&tmp, text).and_then(|_| std::fs::rename(&tmp, dir.join(name)))
        };
        write(format!("{}.decisions.jsonl", s.id()), db.to_jsonl()).map_err(ApiError::internal)?;
        write(format!("{}.gamelog", s.id()), s.log().to_text()).map_err(ApiError::internal)?;
        Ok(())
    }
}

pub fn router(app: Shared) -> Router {
    Router::new()
        .route("/v1/sessions", post(create_session))
        .route("/v1/sessions/{id}", get(get_session))
        .route("/v1/sessions/{id}/actions", post(submit_action))
        .route("/v1/sessions/{id}/end", post(end_session))
        .route("/v1/presets", get(presets))
        .layer(CorsLayer::permissive())
        .with_state(app)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    if let Some(dir) = &config.capture_dir {
        std::fs::create_dir_all(dir)?;
    }
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(App::new(config))).await
}

fn capture_name(n: u64) -> String {
    format!("s{n}.decisions.jsonl")
}

fn body<T>(b: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    b.map(|Json(v)| v).map_err(|e| ApiError::bad_request("bad_request", e.body_text()))
}

async fn create_session(
    State(app): State<Shared>,
    req: Result<Json<CreateSession>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let req = body(req)?;
    let preset: Preset =
        req.preset.parse().map_err(|e: DecisionError| ApiError::bad_request("unknown_preset", e.to_string()))?;
    let mut reg = app.registry.lock().expect("registry lock");
    // Skip ids whose capture files survive from an earlier run.
    while app.config.capture_dir.as_ref().is_some_and(|d| d.join(capture_name(reg.created + 1)).exists()) {
        reg.created += 1;
    }
    let n = reg.created;
    let id = format!("s{}", n + 1);
    let seed = req.seed.unwrap_or(app.config.seed_base.wrapping_add(n));
    let capture = req.capture.unwrap_or(app.config.capture_dir.is_some());
    let (session, events) = Session::new(&id, preset, seed, req.human_seat.unwrap_or(0), capture, app.config.rules)?;
    app.persist(&session)?;
    let view = session.view(events);
    reg.created += 1;
    reg.sessions.insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let s = app.session(&id)?;
    let s = s.lock().expect("session lock");
    Ok(Json(s.view(Vec::new())))
}

async fn submit_action(
    State(app): State<Shared>,
    Path(id): Path<String>,
    req: Result<Json<ActionInput>, JsonRejection>,
) -> Result<Json<SessionView>, ApiError> {
    let s = app.session(&id)?;
    let action = body(req)?.to_action().map_err(|e| ApiError::bad_request("bad_action", e))?;
    let mut s = s.lock().expect("session lock");
    let events = s.submit(action)?;
    app.persist(&s)?;
    Ok(Json(s.view(events)))
}

async fn end_session(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<EndReport>, ApiError> {
    let s = app.session(&id)?;
    let mut s = s.lock().expect("session lock");
    let report = s.end()?;
    app.persist(&s)?;
    Ok(Json(report))
}

async fn presets() -> Json<Vec<PresetInfo>> {
    Json(
        Preset::ALL
            .iter()
            .map(|p| PresetInfo { name: p.name().into(), weights: p.weights::<f64>().to_toml(Some(p.name())) })
            .collect(),
    )
}
