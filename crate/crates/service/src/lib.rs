mod error;
mod session;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use silting_core::decompose::Registry;
use silting_core::silting::Direction;
use silting_core::{build_algebra, Field, Presentation};
use tokio::sync::{Mutex as AsyncMutex, OwnedMutexGuard};

pub use error::ApiError;
pub use session::{Action, Session};

type Handle = Arc<AsyncMutex<Session>>;

/// Sessions by id, and one registry per algebra shared by all of its sessions.
pub struct AppState {
    sessions: Mutex<HashMap<String, Handle>>,
    registries: Mutex<HashMap<String, Arc<Registry>>>,
    field: Option<Field>,
    lock_timeout: Duration,
}

impl AppState {
    pub fn new(field: Option<Field>) -> AppState {
        AppState::with_timeout(field, Duration::from_secs(10))
    }

    /// `lock_timeout` bounds how long a request waits for its session.
    pub fn with_timeout(field: Option<Field>, lock_timeout: Duration) -> AppState {
        AppState {
            sessions: Mutex::new(HashMap::new()),
            registries: Mutex::new(HashMap::new()),
            field,
            lock_timeout,
        }
    }

    fn handle(&self, id: &str) -> Result<Handle, ApiError> {
        self.sessions
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found("UnknownSession", format!("no session {id}")))
    }

    /// Waits for exclusive access to a session, as every request does.
    pub async fn lock(&self, id: &str) -> Result<OwnedMutexGuard<Session>, ApiError> {
        let h = self.handle(id)?;
        tokio::time::timeout(self.lock_timeout, h.lock_owned())
            .await
            .map_err(|_| ApiError::conflict("SessionBusy", format!("session {id} is busy")))
    }

    fn registry(&self, pres: &Presentation) -> Result<Arc<Registry>, ApiError> {
        let alg = build_algebra(pres).map_err(|e| ApiError::unprocessable("MalformedAlgebra", e.to_string()))?;
        let key = format!("{}/{}", alg.hash(), alg.field().label());
        let mut regs = self.registries.lock().unwrap();
        Ok(regs.entry(key).or_insert_with(|| Arc::new(Registry::new(Arc::new(alg)))).clone())
    }
}

pub type Shared = Arc<AppState>;

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(state_of).delete(remove))
        .route("/sessions/{id}/mutate", post(mutate))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/graph", get(graph))
        .route("/sessions/{id}/compare", get(compare))
        .with_state(state)
}

pub async fn serve(port: u16, field: Option<Field>) -> std::io::Result<()> {
    let app = router(Arc::new(AppState::new(field)));
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

fn parse_json(body: &Bytes) -> Result<Value, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::unprocessable("MalformedJson", e.to_string()))
}

fn field_of(v: &Value, default: Option<Field>) -> Result<Option<Field>, ApiError> {
    match v.get("field") {
        None | Some(Value::Null) => Ok(default),
        Some(Value::Number(n)) => {
            let c = n.as_u64().ok_or_else(|| ApiError::unprocessable("BadField", "field must be a characteristic"))?;
            Field::from_characteristic(c).map(Some).map_err(|e| ApiError::unprocessable("BadField", e.to_string()))
        }
        Some(Value::String(s)) if s.eq_ignore_ascii_case("q") => Ok(Some(Field::Rational)),
        Some(_) => Err(ApiError::unprocessable("BadField", "field must be a characteristic or \"Q\"")),
    }
}

/// `{"builtin": name}`, `{"algebra": presentation}` or a bare presentation.
fn presentation(body: &Value, default: Option<Field>) -> Result<Presentation, ApiError> {
    let bad = |e: silting_core::AlgebraError| ApiError::unprocessable("MalformedAlgebra", e.to_string());
    if let Some(name) = body.get("builtin") {
        let name = name.as_str().ok_or_else(|| ApiError::unprocessable("MalformedAlgebra", "builtin must be a string"))?;
        let field = field_of(body, default)?.unwrap_or_default();
        return Presentation::builtin(name, field).map_err(bad);
    }
    if let Some(alg) = body.get("algebra") {
        return Presentation::from_json(&alg.to_string(), field_of(body, default)?).map_err(bad);
    }
    Presentation::from_json(&body.to_string(), default).map_err(bad)
}

async fn create(State(st): State<Shared>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let v = parse_json(&body)?;
    let pres = presentation(&v, st.field)?;
    let st2 = st.clone();
    let s = tokio::task::spawn_blocking(move || -> Result<Session, ApiError> {
        let reg = st2.registry(&pres)?;
        Ok(Session::new(uuid::Uuid::new_v4().to_string(), reg))
    })
    .await
    .expect("session construction panicked")?;
    let root = s.node_view(0);
    let out = json!({
        "session_id": s.id,
        "root": root,
        "certificate": root["certificate"],
    });
    st.sessions.lock().unwrap().insert(s.id.clone(), Arc::new(AsyncMutex::new(s)));
    Ok((StatusCode::CREATED, Json(out)))
}

async fn state_of(State(st): State<Shared>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let s = st.lock(&id).await?;
    Ok(Json(s.state_view()))
}

async fn remove(State(st): State<Shared>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    let guard = st.lock(&id).await?;
    st.sessions.lock().unwrap().remove(&id);
    drop(guard);
    Ok(StatusCode::NO_CONTENT)
}

#[derive(Deserialize)]
struct MutateBody {
    summand_class: String,
    direction: Direction,
}

async fn mutate(State(st): State<Shared>, Path(id): Path<String>, body: Bytes) -> Result<Json<Value>, ApiError> {
    let req: MutateBody = serde_json::from_slice(&body).map_err(|e| ApiError::unprocessable("MalformedRequest", e.to_string()))?;
    let mut s = st.lock(&id).await?;
    let out = tokio::task::spawn_blocking(move || -> Result<Value, ApiError> {
        let (v, edge) = s.mutate(&req.summand_class, req.direction)?;
        Ok(json!({ "node": s.node_view(v), "edge": s.edge_view(&edge), "state": s.state_view() }))
    })
    .await
    .expect("mutation panicked")?;
    Ok(Json(out))
}

async fn undo(State(st): State<Shared>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let mut s = st.lock(&id).await?;
    s.undo()?;
    Ok(Json(s.state_view()))
}

type Params = Query<HashMap<String, String>>;

fn flag(q: &HashMap<String, String>, key: &str) -> Result<bool, ApiError> {
    match q.get(key).map(String::as_str) {
        None | Some("") | Some("false") | Some("0") => Ok(false),
        Some("true") | Some("1") => Ok(true),
        Some(v) => Err(ApiError::unprocessable("BadQuery", format!("{key}={v} is not a boolean"))),
    }
}

fn node_param(q: &HashMap<String, String>, key: &str) -> Result<usize, ApiError> {
    let v = q.get(key).ok_or_else(|| ApiError::unprocessable("BadQuery", format!("missing {key}")))?;
    v.parse().map_err(|_| ApiError::unprocessable("BadQuery", format!("{key}={v} is not a node id")))
}

async fn graph(State(st): State<Shared>, Path(id): Path<String>, Query(q): Params) -> Result<Json<Value>, ApiError> {
    let mod_shift = flag(&q, "mod_shift")?;
    let s = st.lock(&id).await?;
    Ok(Json(s.graph_view(mod_shift)))
}

async fn compare(State(st): State<Shared>, Path(id): Path<String>, Query(q): Params) -> Result<Json<Value>, ApiError> {
    let (a, b) = (node_param(&q, "a")?, node_param(&q, "b")?);
    let s = st.lock(&id).await?;
    tokio::task::spawn_blocking(move || s.compare(a, b).map(Json)).await.expect("comparison panicked")
}
