//! Scripted scenario replay: context → suggestion → interaction plan →
//! recognizers over a recorded trace → arbitration → response, with each
//! stage timed on a monotonic clock and the outcome checked against the
//! script's expectations.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Deserializer, Serialize};

use crate::adaptation::{plan_interaction, GatingConfig, InputModality, InteractionPlan};
use crate::context::{ContextSnapshot, ContextVariant, Situation, Strictness};
use crate::gestures::synth::option_targets;
use crate::gestures::{
    recognize, GazeTarget, PromptTimeout, RecognizedInput, RecognizerConfig, ResponseValue,
    SensorTrace,
};
use crate::recommendation::{AgentSuggestion, PresentationModality, QueryType, Recommender};

pub use report::{LatencyStats, SuiteSummary};

/// Reply used when the user declines; no backend call is made for it.
pub const DECLINE_RESPONSE: &str = "Okay, I'll leave it for now.";

fn strict_snapshot<'de, D: Deserializer<'de>>(d: D) -> Result<ContextSnapshot, D::Error> {
    let value = serde_json::Value::deserialize(d)?;
    ContextSnapshot::from_json_value(value, Strictness::Strict).map_err(serde::de::Error::custom)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query_type: Option<QueryType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationModality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enabled_inputs: Option<BTreeSet<InputModality>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response_value: Option<ResponseValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioScript {
    pub id: String,
    #[serde(default)]
    pub narration: String,
    #[serde(deserialize_with = "strict_snapshot")]
    pub snapshot: ContextSnapshot,
    /// Authored variants that cannot be derived from the snapshot.
    #[serde(default)]
    pub extra_variants: BTreeSet<ContextVariant>,
    /// JSONL trace, relative to the scenario file.
    pub sensor_trace: PathBuf,
    /// Gaze targets; the standard left-to-right layout for the prompt when absent.
    #[serde(default)]
    pub targets: Option<Vec<GazeTarget>>,
    #[serde(default)]
    pub expected: Option<Expectations>,
    pub prompt_deadline_ms: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("{path}: {message}")]
    Script { path: PathBuf, message: String },
    #[error("scenario {id}: {source}")]
    Trace {
        id: String,
        #[source]
        source: crate::gestures::TraceError,
    },
    #[error("no scenarios to run")]
    EmptySuite,
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A script together with its parsed trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub script: ScenarioScript,
    pub trace: SensorTrace,
}

impl ScenarioScript {
    pub fn validate(&self) -> Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("id must not be empty".into());
        }
        if self.prompt_deadline_ms == 0 {
            return Err("prompt_deadline_ms must be > 0".into());
        }
        Ok(())
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let script_err = |message: String| ScenarioError::Script {
            path: path.to_path_buf(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let script: ScenarioScript =
            serde_json::from_str(&text).map_err(|e| script_err(e.to_string()))?;
        script.validate().map_err(script_err)?;
        let trace_path = path
            .parent()
            .unwrap_or(Path::new("."))
            .join(&script.sensor_trace);
        let trace = SensorTrace::load(&trace_path).map_err(|source| ScenarioError::Trace {
            id: script.id.clone(),
            source,
        })?;
        Ok(Scenario { script, trace })
    }

    pub fn situation(&self) -> Situation {
        Situation::with_extra_variants(
            self.script.snapshot.clone(),
            self.script.extra_variants.iter().copied(),
        )
    }
}

/// Directory holding the bundled scenario suite.
pub fn bundled_suite_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join("scenarios")
}

/// Every `*.json` scenario in `dir`, in file-name order.
pub fn load_suite(dir: &Path) -> Result<Vec<Scenario>, ScenarioError> {
    let io = |source| ScenarioError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io)?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| Scenario::load(p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Generation,
    Gating,
    Recognition,
    Response,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageError {
    pub stage: Stage,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectationDiff {
    pub field: &'static str,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum UserInput {
    Recognized(RecognizedInput),
    Timeout(PromptTimeout),
    /// The run stopped before recognition.
    NotReached,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub scenario_id: String,
    pub suggestion: Option<AgentSuggestion>,
    pub plan: Option<InteractionPlan>,
    pub user_input: UserInput,
    pub response_text: Option<String>,
    /// Milliseconds per stage that ran.
    pub latencies: BTreeMap<Stage, f64>,
    /// Wall time of the whole run in milliseconds.
    pub total_ms: f64,
    pub errors: Vec<StageError>,
    pub diffs: Vec<ExpectationDiff>,
    pub pass: bool,
}

impl RunRecord {
    /// The record with every timing zeroed, for comparing replays.
    pub fn without_timings(&self) -> RunRecord {
        RunRecord {
            latencies: self.latencies.keys().map(|&s| (s, 0.0)).collect(),
            total_ms: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimConfig {
    pub recognizer: RecognizerConfig,
    pub gating: GatingConfig,
}

fn timed<T>(latencies: &mut BTreeMap<Stage, f64>, stage: Stage, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    latencies.insert(stage, start.elapsed().as_secs_f64() * 1000.0);
    out
}

/// Text of the action the user picked, or `None` if they declined.
pub fn selected_action(suggestion: &AgentSuggestion, value: ResponseValue) -> Option<String> {
    match value {
        ResponseValue::No => None,
        ResponseValue::Yes | ResponseValue::IconActivate => Some(suggestion.action_text.clone()),
        other => other
            .option_index()
            .and_then(|i| suggestion.options.get(i).cloned())
            .or_else(|| Some(suggestion.action_text.clone())),
    }
}

pub fn run_scenario(scenario: &Scenario, recommender: &Recommender, cfg: &SimConfig) -> RunRecord {
    let run_start = Instant::now();
    let script = &scenario.script;
    let situation = scenario.situation();
    let mut latencies = BTreeMap::new();
    let mut record = RunRecord {
        scenario_id: script.id.clone(),
        suggestion: None,
        plan: None,
        user_input: UserInput::NotReached,
        response_text: None,
        latencies: BTreeMap::new(),
        total_ms: 0.0,
        errors: Vec::new(),
        diffs: Vec::new(),
        pass: false,
    };

    match timed(&mut latencies, Stage::Generation, || {
        recommender.suggest(&situation)
    }) {
        Ok(suggestion) => record.suggestion = Some(suggestion),
        Err(e) => record.errors.push(StageError {
            stage: Stage::Generation,
            message: e.to_string(),
        }),
    }

    if let Some(suggestion) = &record.suggestion {
        let plan = timed(&mut latencies, Stage::Gating, || {
            plan_interaction(&situation, suggestion, &cfg.gating)
        });
        let default_targets;
        let targets = match &script.targets {
            Some(t) => t.as_slice(),
            None => {
                default_targets = option_targets(plan.query_type);
                default_targets.as_slice()
            }
        };
        let recognition = timed(&mut latencies, Stage::Recognition, || {
            recognize(
                &scenario.trace,
                targets,
                &plan,
                &cfg.recognizer,
                script.prompt_deadline_ms,
            )
        });
        record.user_input = match recognition.decision {
            Ok(input) => UserInput::Recognized(input),
            Err(timeout) => UserInput::Timeout(timeout),
        };
        if let UserInput::Recognized(input) = &record.user_input {
            match selected_action(suggestion, input.value) {
                None => record.response_text = Some(DECLINE_RESPONSE.to_string()),
                Some(action) => match timed(&mut latencies, Stage::Response, || {
                    recommender.respond(&situation, &action)
                }) {
                    Ok(text) => record.response_text = Some(text),
                    Err(e) => record.errors.push(StageError {
                        stage: Stage::Response,
                        message: e.to_string(),
                    }),
                },
            }
        }
        record.plan = Some(plan);
    }

    if let Some(expected) = &script.expected {
        record.diffs = compare(expected, &record);
    }
    record.pass = record.errors.is_empty() && record.diffs.is_empty();
    record.latencies = latencies;
    record.total_ms = run_start.elapsed().as_secs_f64() * 1000.0;
    record
}

fn diff(
    field: &'static str,
    expected: impl std::fmt::Debug,
    actual: impl std::fmt::Debug,
) -> ExpectationDiff {
    ExpectationDiff {
        field,
        expected: format!("{expected:?}"),
        actual: format!("{actual:?}"),
    }
}

fn compare(expected: &Expectations, record: &RunRecord) -> Vec<ExpectationDiff> {
    let mut out = Vec::new();
    let query = record.suggestion.as_ref().map(|s| s.query_type);
    if let Some(q) = expected.query_type {
        if query != Some(q) {
            out.push(diff("query_type", q, query));
        }
    }
    let presentation = record.plan.as_ref().map(|p| p.presentation);
    if let Some(p) = expected.presentation {
        if presentation != Some(p) {
            out.push(diff("presentation", p, presentation));
        }
    }
    let enabled = record.plan.as_ref().map(|p| &p.enabled_inputs);
    if let Some(e) = &expected.enabled_inputs {
        if enabled != Some(e) {
            out.push(diff("enabled_inputs", e, enabled));
        }
    }
    if let Some(v) = expected.response_value {
        let actual = match &record.user_input {
            UserInput::Recognized(input) => Some(input.value),
            _ => None,
        };
        if actual != Some(v) {
            out.push(diff("response_value", v, &record.user_input));
        }
    }
    out
}

/// Runs every scenario in order and aggregates pass counts and latencies.
pub fn run_suite(
    scenarios: &[Scenario],
    recommender: &Recommender,
    cfg: &SimConfig,
) -> Result<SuiteSummary, ScenarioError> {
    if scenarios.is_empty() {
        return Err(ScenarioError::EmptySuite);
    }
    let records: Vec<RunRecord> = scenarios
        .iter()
        .map(|s| run_scenario(s, recommender, cfg))
        .collect();
    Ok(SuiteSummary::from_records(records))
}
