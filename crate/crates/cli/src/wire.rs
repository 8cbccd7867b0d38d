//! Versioned JSON bodies shared by the HTTP endpoints and the WebSocket
//! session protocol.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use proactive_core::adaptation::InteractionPlan;
use proactive_core::context::{ContextSnapshot, ContextVariant};
use proactive_core::gestures::{GazeTarget, RecognizedInput, ResponseValue, TraceRecord};
use proactive_core::recommendation::AgentSuggestion;

pub const WIRE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    Malformed,
    UnsupportedVersion,
    StaleSeq,
    UnexpectedKind,
    InvalidContext,
    UnknownScenario,
    NoActiveScenario,
    ModalityDisabled,
    IllegalValue,
    InvalidSamples,
    NoDecision,
    BackendError,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: ErrorCode,
    pub message: String,
}

impl ErrorBody {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ErrorBody {
            code,
            message: message.into(),
        }
    }
}

/// Checks `"v"` and decodes the rest of the object as `T`.
pub fn decode_versioned<T: DeserializeOwned>(mut value: Value) -> Result<T, ErrorBody> {
    let Some(object) = value.as_object_mut() else {
        return Err(ErrorBody::new(
            ErrorCode::Malformed,
            "expected a JSON object",
        ));
    };
    match object.remove("v") {
        Some(v) if v == WIRE_VERSION => {}
        Some(v) => {
            return Err(ErrorBody::new(
                ErrorCode::UnsupportedVersion,
                format!("unsupported version {v}"),
            ))
        }
        None => {
            return Err(ErrorBody::new(
                ErrorCode::UnsupportedVersion,
                "missing \"v\" field",
            ))
        }
    }
    serde_json::from_value(value).map_err(|e| ErrorBody::new(ErrorCode::Malformed, e.to_string()))
}

/// Serializes `body` with `"v": 1` added at the top level.
pub fn encode_versioned(body: &impl Serialize) -> Value {
    let mut value = serde_json::to_value(body).expect("wire bodies always serialize");
    if let Some(object) = value.as_object_mut() {
        object.insert("v".into(), WIRE_VERSION.into());
    }
    value
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuggestReply {
    pub suggestion: AgentSuggestion,
    pub plan: InteractionPlan,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RespondRequest {
    pub scenario_id: String,
    pub value: ResponseValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RespondReply {
    pub scenario_id: String,
    pub value: ResponseValue,
    /// `None` when the user declined.
    pub selected_action: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioInfo {
    pub id: String,
    pub narration: String,
    pub snapshot: ContextSnapshot,
    pub extra_variants: Vec<ContextVariant>,
    pub prompt_deadline_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    ScenarioStart,
    Prompt,
    InputEvent,
    Decision,
    Response,
    Error,
}

/// One WebSocket frame: `{"v":1,"seq":n,"kind":...,"payload":{...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionMessage {
    pub v: u32,
    pub seq: u64,
    pub kind: MessageKind,
    #[serde(default)]
    pub payload: Value,
}

impl SessionMessage {
    pub fn new(seq: u64, kind: MessageKind, payload: &impl Serialize) -> Self {
        SessionMessage {
            v: WIRE_VERSION,
            seq,
            kind,
            payload: serde_json::to_value(payload).expect("payloads always serialize"),
        }
    }
}

/// Client request to begin a scenario: a bundled scenario by id, or an ad
/// hoc context.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioStart {
    pub scenario_id: Option<String>,
    pub snapshot: Option<Value>,
    pub scene: Option<String>,
    pub extra_variants: Vec<ContextVariant>,
    pub lenient: bool,
    /// Answer window for ad hoc contexts; bundled scenarios use their own.
    pub deadline_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromptPayload {
    pub scenario_id: Option<String>,
    pub narration: String,
    pub suggestion: AgentSuggestion,
    pub plan: InteractionPlan,
    pub targets: Vec<GazeTarget>,
    pub deadline_ms: u64,
}

/// Either an already-recognized input or raw samples for the recognizers.
/// Sample timestamps are milliseconds since the prompt appeared.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum InputEvent {
    Input(RecognizedInput),
    Samples(Vec<TraceRecord>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionPayload {
    pub input: RecognizedInput,
    /// Every enabled recognizer's first confirmation, for raw-sample events.
    pub candidates: Vec<RecognizedInput>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponsePayload {
    pub scenario_id: Option<String>,
    pub value: ResponseValue,
    pub selected_action: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorPayload {
    pub code: ErrorCode,
    pub message: String,
    /// Seq of the client message that caused the error, when known.
    pub echo_seq: Option<u64>,
}
