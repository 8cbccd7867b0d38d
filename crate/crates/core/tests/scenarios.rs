//! The bundled scenario suite and the replay engine.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use proactive_core::adaptation::InputModality;
use proactive_core::context::{ActivityType, ContextSnapshot};
use proactive_core::gestures::synth::{self, option_targets};
use proactive_core::gestures::{HandPose, Nlcs, SensorTrace, VoiceEvent};
use proactive_core::recommendation::{
    Backend, BackendError, CannedCompletion, QueryType, Recommender,
};
use proactive_core::simulator::{
    load_suite, run_scenario, run_suite, Expectations, Scenario, ScenarioError, ScenarioScript,
    SimConfig, Stage, UserInput,
};

fn suite_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/scenarios")
}

fn gaze_on(
    query: QueryType,
    index: usize,
    t0: u64,
    duration: u64,
) -> Vec<proactive_core::gestures::GazeSample> {
    synth::gaze_at(t0, &option_targets(query)[index], duration, 30)
}

/// The recorded behaviour for each bundled scenario. Distractors from
/// suppressed channels are included on purpose.
fn build_trace(id: &str) -> SensorTrace {
    let mut t = SensorTrace::default();
    match id {
        "01-menu-unfamiliar" => {
            t.head = synth::head_still(0, 3000, 30);
            t.voice = vec![VoiceEvent::transcript(1800, "um, two", 0.92)];
        }
        "02-menu-social" => {
            t.head = synth::head_still(0, 5000, 30);
            t.gaze = synth::gaze_away(0, 450, 30);
            t.gaze.extend(gaze_on(QueryType::Icon, 0, 500, 3700));
            t.voice = vec![VoiceEvent::transcript(900, "yes", 0.95)];
        }
        "03-cooking-unfamiliar" => {
            t.head = synth::head_still(0, 2000, 30);
            t.hand = synth::hand_hold(600, HandPose::Three, 1100, 30);
        }
        "04-cooking-hands" => {
            t.hand = synth::hand_hold(200, HandPose::ThumbsUp, 1100, 30);
            t.head = synth::head_still(0, 1400, 30);
            t.head.extend(synth::nod(1500, 4, 0.1, 100));
        }
        "05-museum-unfamiliar" => {
            t.gaze = synth::gaze_away(0, 2000, 30);
            t.head = synth::tilt_roll(800, 0.35, 400, 30);
        }
        "06-museum-crowded" => {
            t.gaze = gaze_on(QueryType::Icon, 1, 0, 3600);
            t.hand = synth::hand_hold(400, HandPose::ThumbsUp, 1100, 30);
            t.voice = vec![VoiceEvent::transcript(200, "yes", 0.9)];
        }
        "07-commuting-unfamiliar" => {
            t.head = synth::head_still(0, 4000, 30);
            t.gaze = gaze_on(QueryType::MultiChoice, 1, 300, 3600);
        }
        "08-commuting-rush" => {
            t.head = synth::head_still(0, 2000, 30);
            t.voice = vec![
                VoiceEvent::transcript(700, "no", 0.5),
                VoiceEvent::transcript(1200, "yes please", 0.88),
            ];
        }
        "09-workout-unfamiliar" => {
            t.voice = vec![VoiceEvent::transcript(400, "one", 0.95)];
            t.hand = synth::hand_hold(900, HandPose::Two, 1100, 30);
        }
        "10-workout-hands" => {
            t.hand = synth::hand_hold(100, HandPose::ThumbsDown, 1100, 30);
            t.gaze = synth::gaze_away(0, 2000, 30);
            t.voice = vec![VoiceEvent::nlcs(1500, Nlcs::Affirm, 0.85)];
        }
        "11-grocery-unfamiliar" => {
            t.head = synth::tilt_back(1000, 0.45, 400, 30);
        }
        "12-grocery-rush" => {
            t.gaze = gaze_on(QueryType::Binary, 0, 0, 3600);
            t.head = synth::shake(600, 3, 0.12, 120);
        }
        other => panic!("no trace recipe for {other}"),
    }
    t
}

fn rule_suite() -> Vec<Scenario> {
    load_suite(&suite_dir()).unwrap()
}

#[test]
fn shipped_traces_are_current() {
    let update = std::env::var_os("UPDATE_FIXTURES").is_some();
    let dir = suite_dir();
    let mut ids = Vec::new();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|x| x == "json") {
            let script: ScenarioScript =
                serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
            let expected = build_trace(&script.id).to_jsonl();
            let trace_path = dir.join(&script.sensor_trace);
            if update {
                std::fs::write(&trace_path, &expected).unwrap();
            }
            assert_eq!(
                std::fs::read_to_string(&trace_path).unwrap(),
                expected,
                "{}",
                script.id
            );
            ids.push(script.id);
        }
    }
    assert_eq!(ids.len(), 12);
}

#[test]
fn shipped_suite_passes_with_rule_backend() {
    let summary = run_suite(
        &rule_suite(),
        &Recommender::rule_based(),
        &SimConfig::default(),
    )
    .unwrap();
    assert!(summary.all_passed(), "{}", summary.render_text());
    assert_eq!(summary.passed, 12);
}

#[test]
fn suite_confirms_every_modality() {
    let summary = run_suite(
        &rule_suite(),
        &Recommender::rule_based(),
        &SimConfig::default(),
    )
    .unwrap();
    let used: BTreeSet<_> = summary
        .records
        .iter()
        .filter_map(|r| match &r.user_input {
            UserInput::Recognized(i) => Some(i.modality),
            _ => None,
        })
        .collect();
    assert_eq!(used.len(), InputModality::ALL.len());
}

#[test]
fn replay_is_deterministic_apart_from_timings() {
    let scenarios = rule_suite();
    let a = run_suite(
        &scenarios,
        &Recommender::rule_based(),
        &SimConfig::default(),
    )
    .unwrap();
    let b = run_suite(
        &scenarios,
        &Recommender::rule_based(),
        &SimConfig::default(),
    )
    .unwrap();
    for (x, y) in a.records.iter().zip(&b.records) {
        assert_eq!(x.without_timings(), y.without_timings());
    }
}

#[test]
fn record_invariants() {
    let summary = run_suite(
        &rule_suite(),
        &Recommender::rule_based(),
        &SimConfig::default(),
    )
    .unwrap();
    for r in &summary.records {
        let plan = r.plan.as_ref().unwrap();
        if let UserInput::Recognized(input) = &r.user_input {
            assert!(plan.is_enabled(input.modality), "{}", r.scenario_id);
        }
        let staged: f64 = r.latencies.values().sum();
        assert!(r.latencies.values().all(|&ms| ms >= 0.0));
        assert!(staged <= r.total_ms, "{}", r.scenario_id);
    }
}

#[test]
fn table_rows_replay_as_described() {
    let scenarios = rule_suite();
    let find = |id: &str| scenarios.iter().find(|s| s.script.id == id).unwrap();
    let museum = run_scenario(
        find("06-museum-crowded"),
        &Recommender::rule_based(),
        &SimConfig::default(),
    );
    let s = museum.suggestion.as_ref().unwrap();
    assert_eq!(s.query_type, QueryType::Icon);
    assert_eq!(
        museum.plan.as_ref().unwrap().presentation.as_str(),
        "visual_only"
    );

    let grocery = run_scenario(
        find("12-grocery-rush"),
        &Recommender::rule_based(),
        &SimConfig::default(),
    );
    let plan = grocery.plan.as_ref().unwrap();
    assert_eq!(
        grocery.suggestion.as_ref().unwrap().query_type,
        QueryType::Binary
    );
    assert_eq!(plan.presentation.as_str(), "audio_only");
    assert!(!plan.is_enabled(InputModality::Gaze));
    // The gaze dwell in the trace would have answered first had gaze been enabled.
    assert!(
        matches!(grocery.user_input, UserInput::Recognized(i) if i.modality == InputModality::HeadGesture)
    );
}

fn in_memory(trace: SensorTrace, expected: Option<Expectations>) -> Scenario {
    let mut snapshot = ContextSnapshot::neutral(ActivityType::Cooking);
    snapshot.familiarity = proactive_core::context::Familiarity::Unfamiliar;
    Scenario {
        script: ScenarioScript {
            id: "memory".into(),
            narration: String::new(),
            snapshot,
            extra_variants: BTreeSet::new(),
            sensor_trace: "unused.jsonl".into(),
            targets: None,
            expected,
            prompt_deadline_ms: 5000,
        },
        trace,
    }
}

#[test]
fn silent_trace_times_out() {
    let expected = Expectations {
        response_value: Some(proactive_core::gestures::ResponseValue::Option1),
        ..Default::default()
    };
    let r = run_scenario(
        &in_memory(SensorTrace::default(), Some(expected)),
        &Recommender::rule_based(),
        &SimConfig::default(),
    );
    assert!(matches!(r.user_input, UserInput::Timeout(t) if t.deadline_ms == 5000));
    assert!(!r.pass);
    assert_eq!(r.diffs[0].field, "response_value");

    let r = run_scenario(
        &in_memory(SensorTrace::default(), None),
        &Recommender::rule_based(),
        &SimConfig::default(),
    );
    assert!(r.pass);
    assert_eq!(r.response_text, None);
}

#[test]
fn backend_failure_is_recorded_not_raised() {
    let backend = Backend::model(CannedCompletion::failing(BackendError::Timeout(10)));
    let recommender = Recommender::new(proactive_core::recommendation::default_pool(), backend);
    let r = run_scenario(
        &in_memory(SensorTrace::default(), None),
        &recommender,
        &SimConfig::default(),
    );
    assert!(!r.pass);
    assert_eq!(r.errors[0].stage, Stage::Generation);
    assert!(r.plan.is_none());
    assert!(matches!(r.user_input, UserInput::NotReached));
}

#[test]
fn mock_latency_lands_in_generation_stage() {
    let reply = "Reasoning: new place\nAction: Help with the recipe\n1. Show the next step\n2. Start a timer\n3. List missing ingredients\nQuery format: multi-choice\nModality: audio+visual";
    let backend =
        Backend::model(CannedCompletion::fixed(reply).with_delay(Duration::from_millis(40)));
    let recommender = Recommender::new(proactive_core::recommendation::default_pool(), backend);
    let mut trace = SensorTrace::default();
    trace.voice.push(VoiceEvent::transcript(100, "one", 0.9));
    let r = run_scenario(&in_memory(trace, None), &recommender, &SimConfig::default());
    assert!(r.pass, "{r:?}");
    assert!(r.latencies[&Stage::Generation] >= 40.0);
    assert!(r.latencies[&Stage::Response] >= 40.0);
    assert!(r.latencies[&Stage::Gating] < 40.0);
}

#[test]
fn bad_trace_is_a_scenario_error() {
    let dir = tempfile::tempdir().unwrap();
    let script = serde_json::json!({
        "id": "broken",
        "snapshot": ContextSnapshot::neutral(ActivityType::Workout),
        "sensor_trace": "t.jsonl",
        "prompt_deadline_ms": 100
    });
    std::fs::write(dir.path().join("s.json"), script.to_string()).unwrap();
    std::fs::write(dir.path().join("t.jsonl"), "{\"stream\":\"head\"}\n").unwrap();
    assert!(matches!(
        Scenario::load(&dir.path().join("s.json")),
        Err(ScenarioError::Trace { .. })
    ));

    let mut bad_snapshot = script.clone();
    bad_snapshot["snapshot"]["mood"] = "tired".into();
    std::fs::write(dir.path().join("s.json"), bad_snapshot.to_string()).unwrap();
    assert!(matches!(
        Scenario::load(&dir.path().join("s.json")),
        Err(ScenarioError::Script { .. })
    ));
}

#[test]
fn empty_suite_is_an_error() {
    assert!(matches!(
        run_suite(&[], &Recommender::rule_based(), &SimConfig::default()),
        Err(ScenarioError::EmptySuite)
    ));
}
