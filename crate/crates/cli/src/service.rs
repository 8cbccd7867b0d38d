//! HTTP endpoints and the WebSocket session route.
//!
//! | Route | Body | Reply |
//! |---|---|---|
//! | `POST /suggest` | context (snapshot or scene) | suggestion and interaction plan |
//! | `POST /respond` | scenario id and chosen value | the agent's follow-up text |
//! | `GET /scenarios` | | bundled scenarios |
//! | `GET /policy` | | the adaptation policy table |
//! | `GET /session` | WebSocket upgrade | [`crate::session`] protocol |
//!
//! Errors come back as `{"v":1,"code":...,"message":...}` with a 4xx status
//! for bad requests and 502 for backend failures. Engine calls run on the
//! blocking pool since model backends block on network I/O.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::Value;

use proactive_core::adaptation::policy_table;
use proactive_core::simulator::{selected_action, DECLINE_RESPONSE};

use crate::engine::{ContextInput, Engine, EngineError};
use crate::session::Session;
use crate::wire::{
    decode_versioned, encode_versioned, ErrorBody, ErrorCode, RespondReply, RespondRequest,
    ScenarioInfo, SuggestReply,
};

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody::new(code, message),
        }
    }

    fn bad_request(body: ErrorBody) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body,
        }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Invalid(m) => {
                ApiError::new(StatusCode::BAD_REQUEST, ErrorCode::InvalidContext, m)
            }
            EngineError::Backend(m) => {
                ApiError::new(StatusCode::BAD_GATEWAY, ErrorCode::BackendError, m)
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(encode_versioned(&self.body))).into_response()
    }
}

type Reply = Result<Json<Value>, ApiError>;

fn parse_body<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T, ApiError> {
    let value: Value = serde_json::from_slice(bytes)
        .map_err(|e| ApiError::bad_request(ErrorBody::new(ErrorCode::Malformed, e.to_string())))?;
    decode_versioned(value).map_err(ApiError::bad_request)
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| {
        ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            ErrorCode::BackendError,
            e.to_string(),
        )
    })?
}

async fn suggest(State(engine): State<Arc<Engine>>, body: Bytes) -> Reply {
    let input: ContextInput = parse_body(&body)?;
    let reply = blocking(move || {
        let situation = engine.situation(&input)?;
        let (suggestion, plan) = engine.suggest(&situation)?;
        Ok(SuggestReply { suggestion, plan })
    })
    .await?;
    Ok(Json(encode_versioned(&reply)))
}

async fn respond(State(engine): State<Arc<Engine>>, body: Bytes) -> Reply {
    let request: RespondRequest = parse_body(&body)?;
    let reply = blocking(move || {
        let scenario = engine.scenario(&request.scenario_id).ok_or_else(|| {
            ApiError::new(
                StatusCode::NOT_FOUND,
                ErrorCode::UnknownScenario,
                format!("no scenario named {:?}", request.scenario_id),
            )
        })?;
        let situation = scenario.situation();
        let (suggestion, plan) = engine.suggest(&situation)?;
        if !request.value.admitted_by(plan.query_type) {
            return Err(ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                ErrorCode::IllegalValue,
                format!(
                    "{} is not an answer to a {} prompt",
                    request.value, plan.query_type
                ),
            ));
        }
        let selected = selected_action(&suggestion, request.value);
        let text = match &selected {
            None => DECLINE_RESPONSE.to_string(),
            Some(action) => engine
                .recommender
                .respond(&situation, action)
                .map_err(|e| ApiError::from(EngineError::from(e)))?,
        };
        Ok(RespondReply {
            scenario_id: request.scenario_id,
            value: request.value,
            selected_action: selected,
            text,
        })
    })
    .await?;
    Ok(Json(encode_versioned(&reply)))
}

async fn scenarios(State(engine): State<Arc<Engine>>) -> Json<Value> {
    let list: Vec<ScenarioInfo> = engine
        .scenarios
        .iter()
        .map(|s| ScenarioInfo {
            id: s.script.id.clone(),
            narration: s.script.narration.clone(),
            snapshot: s.script.snapshot.clone(),
            extra_variants: s.script.extra_variants.iter().copied().collect(),
            prompt_deadline_ms: s.script.prompt_deadline_ms,
        })
        .collect();
    Json(encode_versioned(&serde_json::json!({ "scenarios": list })))
}

async fn policy() -> Json<Value> {
    Json(encode_versioned(
        &serde_json::json!({ "policy": policy_table() }),
    ))
}

async fn session(State(engine): State<Arc<Engine>>, upgrade: WebSocketUpgrade) -> Response {
    upgrade.on_upgrade(move |socket| run_session(socket, engine))
}

/// Frames are handled one at a time, so replies keep the client's order.
async fn run_session(mut socket: WebSocket, engine: Arc<Engine>) {
    let mut session = Session::new(engine);
    while let Some(Ok(frame)) = socket.recv().await {
        let text = match frame {
            Message::Text(text) => text.to_string(),
            Message::Binary(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
            Message::Close(_) => break,
            Message::Ping(_) | Message::Pong(_) => continue,
        };
        let handled = tokio::task::spawn_blocking(move || {
            let out = session.handle_text(&text);
            (session, out)
        })
        .await;
        let out;
        (session, out) = match handled {
            Ok(pair) => pair,
            Err(e) => {
                log::error!("session task failed: {e}");
                break;
            }
        };
        for message in out {
            let text = serde_json::to_string(&message).expect("session messages always serialize");
            if socket.send(Message::Text(text.into())).await.is_err() {
                return;
            }
        }
    }
}

pub fn router(engine: Arc<Engine>) -> Router {
    Router::new()
        .route("/suggest", post(suggest))
        .route("/respond", post(respond))
        .route("/scenarios", get(scenarios))
        .route("/policy", get(policy))
        .route("/session", get(session))
        .with_state(engine)
}

/// Serves on `127.0.0.1:port` until the process is stopped. Port 0 picks a
/// free port; `on_bound` receives the actual address.
pub async fn serve(
    engine: Arc<Engine>,
    port: u16,
    on_bound: impl FnOnce(SocketAddr),
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    on_bound(listener.local_addr()?);
    axum::serve(listener, router(engine)).await
}
