//! HTTP routes.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::CorsLayer;
use uuid::Uuid;

use railgrid::circuit::Inventory;
use railgrid::geometry::{Cell, Nature, PieceMode, WidthConfig};
use railgrid::record::CircuitRecord;
use railgrid::render::{render_placements, RenderConfig};

use crate::journal::{Event, Journal};
use crate::session::{Move, Session, Status};

pub const DEFAULT_CLOSURE_BOUND: usize = 6;

/// Body of `POST /sessions`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    /// Per-type caps, `null` for unbounded; six or eight entries. Absent
    /// means unbounded.
    #[serde(default)]
    pub caps: Option<Vec<Option<i64>>>,
    /// Allow the sharp pieces.
    #[serde(default)]
    pub extended: bool,
    #[serde(default)]
    pub rail_width: Option<f64>,
}

impl CreateSession {
    pub fn build(&self) -> Result<Session, String> {
        let mut caps = [None; 8];
        if let Some(given) = &self.caps {
            if given.len() != 6 && given.len() != 8 {
                return Err(format!("caps needs 6 or 8 entries, got {}", given.len()));
            }
            for (slot, cap) in caps.iter_mut().zip(given) {
                *slot = match *cap {
                    None => None,
                    Some(c) => Some(u32::try_from(c).map_err(|_| format!("cap {c} must be a non-negative integer"))?),
                };
            }
        }
        let width = match self.rail_width {
            None => WidthConfig::default(),
            Some(e) => WidthConfig::with_rail_width(e).map_err(|e| e.to_string())?,
        };
        let mode = if self.extended { PieceMode::Extended } else { PieceMode::Standard };
        Ok(Session::new(Inventory::from_caps(caps), mode, width))
    }
}

pub struct AppState {
    sessions: RwLock<HashMap<Uuid, Arc<Mutex<Session>>>>,
    journal: Option<Journal>,
    closure_bound: usize,
}

impl AppState {
    pub fn new(closure_bound: usize, journal: Option<Journal>) -> Self {
        AppState {
            sessions: RwLock::new(HashMap::new()),
            journal,
            closure_bound,
        }
    }

    /// Restores sessions from previously journaled events.
    pub fn with_sessions(mut self, sessions: HashMap<Uuid, Session>) -> Self {
        self.sessions = RwLock::new(sessions.into_iter().map(|(k, v)| (k, Arc::new(Mutex::new(v)))).collect());
        self
    }

    fn session(&self, id: &str) -> Result<(Uuid, Arc<Mutex<Session>>), ApiError> {
        let uuid = Uuid::parse_str(id).map_err(|_| ApiError::not_found(id))?;
        let map = self.sessions.read().expect("session map poisoned");
        map.get(&uuid).cloned().map(|s| (uuid, s)).ok_or_else(|| ApiError::not_found(id))
    }

    fn record(&self, event: Event) -> Result<(), ApiError> {
        match &self.journal {
            Some(j) => j.append(&event).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())),
            None => Ok(()),
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("no session {id}"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

/// Snapshot returned by most endpoints.
#[derive(Debug, Serialize)]
pub struct SessionView {
    pub id: String,
    pub status: Status,
    pub caps: [Option<u32>; 8],
    pub remaining: [Option<u32>; 8],
    /// Pieces still available in total, `null` when unbounded.
    pub available: Option<u64>,
    pub extended: bool,
    pub rail_width: f64,
    pub directions: Vec<u8>,
    pub placed: Vec<PlacedView>,
    pub head: HeadView,
}

#[derive(Debug, Serialize)]
pub struct PlacedView {
    pub index: usize,
    pub square: Cell,
    pub code: i8,
}

#[derive(Debug, Serialize)]
pub struct HeadView {
    pub square: Cell,
    pub heading: Option<u8>,
    pub nature: Option<&'static str>,
}

fn view(id: Uuid, s: &Session) -> SessionView {
    SessionView {
        id: id.to_string(),
        status: s.status(),
        caps: *s.inventory().caps(),
        remaining: s.remaining(),
        available: s.available(),
        extended: s.mode() == PieceMode::Extended,
        rail_width: s.width().rail_width,
        directions: s.directions().iter().map(|d| d.index()).collect(),
        placed: s
            .placed()
            .iter()
            .map(|p| PlacedView {
                index: p.index,
                square: p.square,
                code: p.code.signed(),
            })
            .collect(),
        head: HeadView {
            square: s.head(),
            heading: s.directions().last().map(|d| d.index()),
            nature: s.head_nature().map(|n| match n {
                Nature::Middle => "middle",
                Nature::Vertex => "vertex",
            }),
        },
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/moves", get(moves).post(apply))
        .route("/sessions/{id}/moves/last", delete(undo))
        .route("/sessions/{id}/closure", get(closure))
        .route("/sessions/{id}/render", get(render))
        .route("/sessions/{id}/export", get(export))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

async fn create(State(state): State<Arc<AppState>>, body: Bytes) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let req: CreateSession = if body.iter().all(u8::is_ascii_whitespace) {
        CreateSession::default()
    } else {
        serde_json::from_slice(&body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))?
    };
    let session = req.build().map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e))?;
    let id = Uuid::new_v4();
    state.record(Event::Create { id, request: req })?;
    let v = view(id, &session);
    state
        .sessions
        .write()
        .expect("session map poisoned")
        .insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(v)))
}

async fn show(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let (uuid, s) = state.session(&id)?;
    let s = s.lock().expect("session poisoned");
    Ok(Json(view(uuid, &s)))
}

async fn moves(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let (_, s) = state.session(&id)?;
    let s = s.lock().expect("session poisoned");
    Ok(Json(s.legal_moves()).into_response())
}

async fn apply(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> Result<Json<SessionView>, ApiError> {
    let (uuid, s) = state.session(&id)?;
    let mv: Move = serde_json::from_slice(&body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))?;
    let mut s = s.lock().expect("session poisoned");
    let mut next = s.clone();
    if next.apply(mv).is_none() {
        return Err(ApiError::new(StatusCode::CONFLICT, format!("{mv:?} is not a legal move here")));
    }
    state.record(Event::Apply { id: uuid, action: mv })?;
    *s = next;
    Ok(Json(view(uuid, &s)))
}

async fn undo(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let (uuid, s) = state.session(&id)?;
    let mut s = s.lock().expect("session poisoned");
    if s.directions().is_empty() {
        return Err(ApiError::new(StatusCode::CONFLICT, "nothing to undo"));
    }
    state.record(Event::Undo { id: uuid })?;
    s.undo();
    Ok(Json(view(uuid, &s)))
}

#[derive(Debug, Deserialize)]
struct ClosureQuery {
    max: Option<usize>,
}

async fn closure(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<ClosureQuery>,
) -> Result<Response, ApiError> {
    let max = q.max.unwrap_or(state.closure_bound);
    if max > state.closure_bound {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("max {max} exceeds the bound {}", state.closure_bound),
        ));
    }
    let (_, s) = state.session(&id)?;
    let snapshot = s.lock().expect("session poisoned").clone();
    let result = tokio::task::spawn_blocking(move || snapshot.closure(max))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(Json(result).into_response())
}

async fn render(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let (_, s) = state.session(&id)?;
    let s = s.lock().expect("session poisoned");
    let cfg = RenderConfig {
        width: *s.width(),
        grid: true,
        ..RenderConfig::default()
    };
    let head = (s.status() == Status::Open).then(|| s.head());
    let svg = render_placements(&s.placed(), head, &cfg)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response())
}

async fn export(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<CircuitRecord>, ApiError> {
    let (_, s) = state.session(&id)?;
    let s = s.lock().expect("session poisoned");
    let c = s
        .circuit()
        .ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "session is still open"))?;
    Ok(Json(CircuitRecord::from(&c)))
}
