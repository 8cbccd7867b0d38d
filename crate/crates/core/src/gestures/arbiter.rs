//! Picks the single answer to a prompt from whatever the enabled
//! recognizers confirmed.

use serde::Serialize;

use super::{
    classify_hand, detect_head_gesture, gaze_input, match_voice, GazeTarget, RecognizedInput,
    RecognizerConfig, SensorTrace,
};
use crate::adaptation::{InputModality, InteractionPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("no input before the {deadline_ms} ms deadline")]
pub struct PromptTimeout {
    pub deadline_ms: u64,
}

/// Order used to break exact timestamp ties; lower wins.
fn tie_rank(modality: InputModality) -> u8 {
    match modality {
        InputModality::Voice => 0,
        InputModality::HeadGesture => 1,
        InputModality::HandGesture => 2,
        InputModality::Gaze => 3,
    }
}

/// Earliest confirmed input from an enabled modality that is legal for the
/// prompt and arrives no later than `deadline_ms`. Everything else is dropped.
pub fn arbitrate(
    candidates: impl IntoIterator<Item = RecognizedInput>,
    plan: &InteractionPlan,
    deadline_ms: u64,
) -> Result<RecognizedInput, PromptTimeout> {
    candidates
        .into_iter()
        .filter(|c| {
            plan.is_enabled(c.modality)
                && c.value.admitted_by(plan.query_type)
                && c.t <= deadline_ms
        })
        .min_by_key(|c| (c.t, tie_rank(c.modality)))
        .ok_or(PromptTimeout { deadline_ms })
}

/// Per-modality results and the arbitrated answer for one prompt.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Recognition {
    /// First confirmation of each enabled recognizer, in modality order.
    pub candidates: Vec<RecognizedInput>,
    pub decision: Result<RecognizedInput, PromptTimeout>,
}

/// Runs the recognizers for the plan's enabled modalities over a trace and
/// arbitrates their results. Disabled modalities are never evaluated.
pub fn recognize(
    trace: &SensorTrace,
    targets: &[GazeTarget],
    plan: &InteractionPlan,
    cfg: &RecognizerConfig,
    deadline_ms: u64,
) -> Recognition {
    let prompt = plan.query_type;
    let candidates: Vec<_> = plan
        .enabled_inputs
        .iter()
        .filter_map(|m| match m {
            InputModality::Gaze => gaze_input(&trace.gaze, targets, prompt, cfg),
            InputModality::HandGesture => classify_hand(&trace.hand, prompt, cfg),
            InputModality::HeadGesture => detect_head_gesture(&trace.head, prompt, cfg),
            InputModality::Voice => match_voice(&trace.voice, prompt, cfg),
        })
        .collect();
    let decision = arbitrate(candidates.iter().copied(), plan, deadline_ms);
    Recognition {
        candidates,
        decision,
    }
}
