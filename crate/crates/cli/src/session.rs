//! One WebSocket session as a synchronous state machine.
//!
//! The client opens a scenario with `scenario_start`; the server pushes a
//! `prompt`. The client then sends `input_event`s until one is accepted,
//! which yields a `decision` followed by a `response`. Problems with a
//! single message produce an `error` carrying the offending seq and leave
//! the session open; a backend failure also aborts the current scenario.
//!
//! Server messages are numbered 1, 2, 3, ... per session. Client messages
//! must carry strictly increasing seq values of their own.

use std::sync::Arc;

use serde_json::Value;

use proactive_core::adaptation::{InputModality, InteractionPlan};
use proactive_core::context::Situation;
use proactive_core::gestures::synth::option_targets;
use proactive_core::gestures::{recognize, GazeTarget, RecognizedInput, SensorTrace, TraceRecord};
use proactive_core::recommendation::AgentSuggestion;
use proactive_core::simulator::{selected_action, DECLINE_RESPONSE};

use crate::engine::{ContextInput, Engine, EngineError};
use crate::wire::{
    DecisionPayload, ErrorCode, ErrorPayload, InputEvent, MessageKind, PromptPayload,
    ResponsePayload, ScenarioStart, SessionMessage, WIRE_VERSION,
};

/// Answer window for ad hoc contexts that do not name one.
pub const DEFAULT_DEADLINE_MS: u64 = 10_000;

#[derive(Debug, Clone)]
struct Active {
    scenario_id: Option<String>,
    situation: Situation,
    suggestion: AgentSuggestion,
    plan: InteractionPlan,
    targets: Vec<GazeTarget>,
    deadline_ms: u64,
}

#[derive(Debug, Clone)]
pub struct Session {
    engine: Arc<Engine>,
    sent: u64,
    last_client_seq: Option<u64>,
    active: Option<Active>,
}

struct Failure {
    code: ErrorCode,
    message: String,
    abort: bool,
}

impl Failure {
    fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            abort: false,
        }
    }

    fn from_engine(e: EngineError) -> Self {
        match e {
            EngineError::Invalid(m) => Failure::new(ErrorCode::InvalidContext, m),
            EngineError::Backend(m) => Failure {
                abort: true,
                ..Failure::new(ErrorCode::BackendError, m)
            },
        }
    }
}

impl Session {
    pub fn new(engine: Arc<Engine>) -> Self {
        Session {
            engine,
            sent: 0,
            last_client_seq: None,
            active: None,
        }
    }

    pub fn has_active_scenario(&self) -> bool {
        self.active.is_some()
    }

    /// Handles one client frame and returns the frames to send back.
    pub fn handle_text(&mut self, text: &str) -> Vec<SessionMessage> {
        let value: Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => {
                return vec![self.error(None, Failure::new(ErrorCode::Malformed, e.to_string()))]
            }
        };
        let echo = value.get("seq").and_then(Value::as_u64);
        let message: SessionMessage = match serde_json::from_value(value) {
            Ok(m) => m,
            Err(e) => {
                return vec![self.error(echo, Failure::new(ErrorCode::Malformed, e.to_string()))]
            }
        };
        self.handle(message)
    }

    pub fn handle(&mut self, message: SessionMessage) -> Vec<SessionMessage> {
        let seq = message.seq;
        if message.v != WIRE_VERSION {
            let f = Failure::new(
                ErrorCode::UnsupportedVersion,
                format!("unsupported version {}", message.v),
            );
            return vec![self.error(Some(seq), f)];
        }
        if self.last_client_seq.is_some_and(|last| seq <= last) {
            let f = Failure::new(
                ErrorCode::StaleSeq,
                format!(
                    "seq {seq} does not follow {}",
                    self.last_client_seq.unwrap_or(0)
                ),
            );
            return vec![self.error(Some(seq), f)];
        }
        self.last_client_seq = Some(seq);
        let result = match message.kind {
            MessageKind::ScenarioStart => self.start(message.payload),
            MessageKind::InputEvent => self.input(message.payload),
            other => Err(Failure::new(
                ErrorCode::UnexpectedKind,
                format!(
                    "clients may not send {}",
                    serde_json::to_string(&other).unwrap_or_default()
                ),
            )),
        };
        match result {
            Ok(out) => out,
            Err(f) => {
                if f.abort {
                    self.active = None;
                }
                vec![self.error(Some(seq), f)]
            }
        }
    }

    fn next(&mut self, kind: MessageKind, payload: &impl serde::Serialize) -> SessionMessage {
        self.sent += 1;
        SessionMessage::new(self.sent, kind, payload)
    }

    fn error(&mut self, echo_seq: Option<u64>, f: Failure) -> SessionMessage {
        let payload = ErrorPayload {
            code: f.code,
            message: f.message,
            echo_seq,
        };
        self.next(MessageKind::Error, &payload)
    }

    fn start(&mut self, payload: Value) -> Result<Vec<SessionMessage>, Failure> {
        let start: ScenarioStart = serde_json::from_value(payload)
            .map_err(|e| Failure::new(ErrorCode::Malformed, e.to_string()))?;
        let (scenario_id, narration, situation, targets, deadline_ms) = match &start.scenario_id {
            Some(id) => {
                if start.snapshot.is_some() || start.scene.is_some() {
                    return Err(Failure::new(
                        ErrorCode::Malformed,
                        "give a scenario_id or a context, not both",
                    ));
                }
                let scenario = self.engine.scenario(id).ok_or_else(|| {
                    Failure::new(
                        ErrorCode::UnknownScenario,
                        format!("no scenario named {id:?}"),
                    )
                })?;
                (
                    Some(id.clone()),
                    scenario.script.narration.clone(),
                    scenario.situation(),
                    scenario.script.targets.clone(),
                    scenario.script.prompt_deadline_ms,
                )
            }
            None => {
                let input = ContextInput {
                    snapshot: start.snapshot,
                    scene: start.scene,
                    extra_variants: start.extra_variants,
                    lenient: start.lenient,
                    ..ContextInput::default()
                };
                let situation = self
                    .engine
                    .situation(&input)
                    .map_err(Failure::from_engine)?;
                let deadline = start.deadline_ms.unwrap_or(DEFAULT_DEADLINE_MS);
                if deadline == 0 {
                    return Err(Failure::new(
                        ErrorCode::Malformed,
                        "deadline_ms must be > 0",
                    ));
                }
                (None, String::new(), situation, None, deadline)
            }
        };
        self.active = None;
        let (suggestion, plan) = self
            .engine
            .suggest(&situation)
            .map_err(Failure::from_engine)?;
        let targets = targets.unwrap_or_else(|| option_targets(plan.query_type));
        let prompt = PromptPayload {
            scenario_id: scenario_id.clone(),
            narration,
            suggestion: suggestion.clone(),
            plan: plan.clone(),
            targets: targets.clone(),
            deadline_ms,
        };
        self.active = Some(Active {
            scenario_id,
            situation,
            suggestion,
            plan,
            targets,
            deadline_ms,
        });
        Ok(vec![self.next(MessageKind::Prompt, &prompt)])
    }

    fn input(&mut self, payload: Value) -> Result<Vec<SessionMessage>, Failure> {
        let event: InputEvent = serde_json::from_value(payload)
            .map_err(|e| Failure::new(ErrorCode::Malformed, e.to_string()))?;
        let active = self
            .active
            .as_ref()
            .ok_or_else(|| Failure::new(ErrorCode::NoActiveScenario, "start a scenario first"))?;
        let decision = match event {
            InputEvent::Input(input) => DecisionPayload {
                input: check_direct(active, input)?,
                candidates: Vec::new(),
            },
            InputEvent::Samples(records) => recognize_samples(active, &self.engine, records)?,
        };
        let active = self.active.take().expect("checked above");
        let value = decision.input.value;
        let decision_msg = self.next(MessageKind::Decision, &decision);
        let selected = selected_action(&active.suggestion, value);
        let text = match &selected {
            None => DECLINE_RESPONSE.to_string(),
            Some(action) => match self.engine.recommender.respond(&active.situation, action) {
                Ok(text) => text,
                Err(e) => {
                    let f = Failure::from_engine(e.into());
                    return Ok(vec![decision_msg, self.error(self.last_client_seq, f)]);
                }
            },
        };
        let response = ResponsePayload {
            scenario_id: active.scenario_id,
            value,
            selected_action: selected,
            text,
        };
        Ok(vec![
            decision_msg,
            self.next(MessageKind::Response, &response),
        ])
    }
}

fn check_direct(active: &Active, input: RecognizedInput) -> Result<RecognizedInput, Failure> {
    if !active.plan.is_enabled(input.modality) {
        let reason = active
            .plan
            .suppression_reason(input.modality)
            .unwrap_or("not offered");
        return Err(Failure::new(
            ErrorCode::ModalityDisabled,
            format!("{} is disabled: {reason}", input.modality),
        ));
    }
    if !input.value.admitted_by(active.plan.query_type) {
        return Err(Failure::new(
            ErrorCode::IllegalValue,
            format!(
                "{} is not an answer to a {} prompt",
                input.value, active.plan.query_type
            ),
        ));
    }
    if input.t > active.deadline_ms {
        return Err(Failure::new(
            ErrorCode::NoDecision,
            format!(
                "input at {} ms is past the {} ms deadline",
                input.t, active.deadline_ms
            ),
        ));
    }
    Ok(input)
}

fn stream_modality(record: &TraceRecord) -> InputModality {
    match record {
        TraceRecord::Head(_) => InputModality::HeadGesture,
        TraceRecord::Hand(_) => InputModality::HandGesture,
        TraceRecord::Gaze(_) => InputModality::Gaze,
        TraceRecord::Voice(_) => InputModality::Voice,
    }
}

fn recognize_samples(
    active: &Active,
    engine: &Engine,
    records: Vec<TraceRecord>,
) -> Result<DecisionPayload, Failure> {
    if records.is_empty() {
        return Err(Failure::new(ErrorCode::InvalidSamples, "no samples"));
    }
    let disabled: Vec<InputModality> = {
        let mut seen: Vec<_> = records.iter().map(stream_modality).collect();
        seen.sort();
        seen.dedup();
        seen.into_iter()
            .filter(|m| !active.plan.is_enabled(*m))
            .collect()
    };
    let all_disabled = records
        .iter()
        .all(|r| !active.plan.is_enabled(stream_modality(r)));
    if all_disabled {
        let reasons: Vec<String> = disabled
            .iter()
            .map(|m| {
                format!(
                    "{m}: {}",
                    active.plan.suppression_reason(*m).unwrap_or("not offered")
                )
            })
            .collect();
        return Err(Failure::new(
            ErrorCode::ModalityDisabled,
            format!(
                "samples only cover disabled inputs ({})",
                reasons.join(", ")
            ),
        ));
    }
    let trace = SensorTrace::from_records(records)
        .map_err(|e| Failure::new(ErrorCode::InvalidSamples, e.to_string()))?;
    let recognition = recognize(
        &trace,
        &active.targets,
        &active.plan,
        &engine.sim.recognizer,
        active.deadline_ms,
    );
    match recognition.decision {
        Ok(input) => Ok(DecisionPayload {
            input,
            candidates: recognition.candidates,
        }),
        Err(timeout) => Err(Failure::new(
            ErrorCode::NoDecision,
            format!(
                "no enabled recognizer confirmed an answer within {} ms",
                timeout.deadline_ms
            ),
        )),
    }
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    use super::*;
    use proactive_core::context::{ActivityType, ContextSnapshot, Urgency};
    use proactive_core::gestures::{synth, ResponseValue};
    use proactive_core::recommendation::{
        Backend, BackendError, CannedCompletion, QueryType, Recommender,
    };

    fn grocery_rush() -> Value {
        let mut s = ContextSnapshot::neutral(ActivityType::GroceryShopping);
        s.urgency = Urgency::Rushed;
        s.visually_engaged = true;
        serde_json::to_value(s).unwrap()
    }

    fn frame(seq: u64, kind: &str, payload: Value) -> String {
        json!({"v":1,"seq":seq,"kind":kind,"payload":payload}).to_string()
    }

    fn session() -> Session {
        Session::new(Arc::new(Engine::rule_based()))
    }

    #[test]
    fn prompt_decision_response() {
        let mut s = session();
        let out = s.handle_text(&frame(
            1,
            "scenario_start",
            json!({"snapshot": grocery_rush()}),
        ));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].kind, MessageKind::Prompt);
        assert_eq!(out[0].payload["suggestion"]["query_type"], "binary");

        let nod: Vec<TraceRecord> = synth::nod(0, 3, 0.1, 100)
            .into_iter()
            .map(TraceRecord::Head)
            .collect();
        let out = s.handle_text(&frame(2, "input_event", json!({"samples": nod})));
        let kinds: Vec<_> = out.iter().map(|m| m.kind).collect();
        assert_eq!(kinds, [MessageKind::Decision, MessageKind::Response]);
        assert_eq!(out[0].payload["input"]["value"], "yes");
        assert_eq!(out[0].payload["input"]["modality"], "head_gesture");
        assert!(out[1].payload["text"].as_str().unwrap().contains("grocery"));
        assert_eq!(out.iter().map(|m| m.seq).collect::<Vec<_>>(), [2, 3]);
        assert!(!s.has_active_scenario());
    }

    #[test]
    fn suppressed_modality_is_rejected_and_scenario_survives() {
        let mut s = session();
        s.handle_text(&frame(
            1,
            "scenario_start",
            json!({"snapshot": grocery_rush()}),
        ));
        let gaze = json!({"input": {"modality":"gaze","value":"yes","t":100}});
        let out = s.handle_text(&frame(2, "input_event", gaze));
        assert_eq!(out[0].kind, MessageKind::Error);
        assert_eq!(out[0].payload["code"], "modality_disabled");
        assert_eq!(out[0].payload["echo_seq"], 2);
        assert!(s.has_active_scenario());

        let voice = json!({"input": {"modality":"voice","value":"no","t":100}});
        let out = s.handle_text(&frame(3, "input_event", voice));
        assert_eq!(out[1].payload["text"], DECLINE_RESPONSE);
        assert_eq!(out[1].payload["selected_action"], Value::Null);
    }

    #[test]
    fn malformed_and_stale_frames() {
        let mut s = session();
        let out = s.handle_text("{not json");
        assert_eq!(out[0].payload["code"], "malformed");
        assert_eq!(out[0].payload["echo_seq"], Value::Null);
        let out = s.handle_text(&json!({"v":1,"seq":4,"kind":"shout"}).to_string());
        assert_eq!(out[0].payload["echo_seq"], 4);
        let out = s.handle_text(&frame(
            5,
            "input_event",
            json!({"input": {"modality":"voice","value":"yes","t":0}}),
        ));
        assert_eq!(out[0].payload["code"], "no_active_scenario");
        let out = s.handle_text(&frame(
            5,
            "scenario_start",
            json!({"snapshot": grocery_rush()}),
        ));
        assert_eq!(out[0].payload["code"], "stale_seq");
        let out = s.handle_text(&frame(6, "prompt", json!({})));
        assert_eq!(out[0].payload["code"], "unexpected_kind");
        let out = s.handle_text(&json!({"v":2,"seq":7,"kind":"scenario_start"}).to_string());
        assert_eq!(out[0].payload["code"], "unsupported_version");
        let seqs: Vec<u64> = [&out[0]].iter().map(|m| m.seq).collect();
        assert_eq!(seqs, [6]);
    }

    #[test]
    fn illegal_value_and_unknown_scenario() {
        let mut s = session();
        let out = s.handle_text(&frame(1, "scenario_start", json!({"scenario_id": "nope"})));
        assert_eq!(out[0].payload["code"], "unknown_scenario");
        s.handle_text(&frame(
            2,
            "scenario_start",
            json!({"snapshot": grocery_rush()}),
        ));
        let out = s.handle_text(&frame(
            3,
            "input_event",
            json!({"input": {"modality":"voice","value":"option2","t":5}}),
        ));
        assert_eq!(out[0].payload["code"], "illegal_value");
    }

    #[test]
    fn samples_without_answer_are_no_decision() {
        let mut s = session();
        s.handle_text(&frame(
            1,
            "scenario_start",
            json!({"snapshot": grocery_rush()}),
        ));
        let still: Vec<TraceRecord> = synth::head_still(0, 500, 50)
            .into_iter()
            .map(TraceRecord::Head)
            .collect();
        let out = s.handle_text(&frame(2, "input_event", json!({"samples": still})));
        assert_eq!(out[0].payload["code"], "no_decision");
        let gaze: Vec<TraceRecord> =
            synth::gaze_at(0, &synth::option_targets(QueryType::Binary)[0], 4000, 30)
                .into_iter()
                .map(TraceRecord::Gaze)
                .collect();
        let out = s.handle_text(&frame(3, "input_event", json!({"samples": gaze})));
        assert_eq!(out[0].payload["code"], "modality_disabled");
        let out = s.handle_text(&frame(4, "input_event", json!({"samples": []})));
        assert_eq!(out[0].payload["code"], "invalid_samples");
    }

    #[test]
    fn backend_failure_aborts_scenario() {
        let mut engine = Engine::rule_based();
        engine.recommender = Recommender::new(
            proactive_core::recommendation::default_pool(),
            Backend::model(CannedCompletion::failing(BackendError::Timeout(7))),
        );
        let mut s = Session::new(Arc::new(engine));
        let out = s.handle_text(&frame(
            1,
            "scenario_start",
            json!({"snapshot": grocery_rush()}),
        ));
        assert_eq!(out[0].payload["code"], "backend_error");
        assert!(!s.has_active_scenario());
    }

    #[test]
    fn direct_input_yields_option_text() {
        let mut s = session();
        let mut snap = ContextSnapshot::neutral(ActivityType::Cooking);
        snap.familiarity = proactive_core::context::Familiarity::Unfamiliar;
        s.handle_text(&frame(1, "scenario_start", json!({"snapshot": snap})));
        let out = s.handle_text(&frame(
            2,
            "input_event",
            json!({"input": {"modality":"voice","value":"option2","t":5}}),
        ));
        assert_eq!(
            out[1].payload["value"],
            serde_json::to_value(ResponseValue::Option2).unwrap()
        );
        assert_eq!(out[1].payload["selected_action"], "Start a timer");
    }
}
