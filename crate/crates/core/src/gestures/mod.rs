//! Stream recognizers that turn time-stamped sensor samples into a discrete
//! answer to a prompt: head nod/shake/tilt, hand poses, gaze dwell and
//! bounded-vocabulary voice (including non-lexical sounds), plus an arbiter
//! that keeps the first confirmed answer among the enabled channels.
//!
//! All timestamps are milliseconds from the start of the trace.

pub mod arbiter;
pub mod config;
pub mod gaze;
pub mod hand;
pub mod head;
pub mod synth;
pub mod trace;
pub mod voice;

use serde::{Deserialize, Serialize};

use crate::adaptation::InputModality;
use crate::recommendation::QueryType;
use crate::vocab::vocab;

pub use arbiter::{arbitrate, recognize, PromptTimeout, Recognition};
pub use config::{ConfigError, RecognizerConfig};
pub use gaze::{detect_gaze_dwell, gaze_input, GazeSample, GazeTarget};
pub use hand::{classify_hand, HandFrame, HandPose};
pub use head::{detect_head_gesture, HeadPoseSample};
pub use trace::{SensorTrace, TraceError, TraceRecord};
pub use voice::{match_voice, Nlcs, VoiceEvent, VoiceKind};

pub type Vec3 = [f64; 3];

vocab! {
    /// A user's answer to a prompt.
    pub enum ResponseValue: "response value" {
        Yes = "yes",
        No = "no",
        Option1 = "option1" | "one",
        Option2 = "option2" | "two",
        Option3 = "option3" | "three",
        IconActivate = "icon_activate" | "activate",
    }
}

impl ResponseValue {
    /// Whether `self` is a legal answer to a prompt of type `query`.
    pub fn admitted_by(self, query: QueryType) -> bool {
        use ResponseValue::*;
        match query {
            QueryType::Binary => matches!(self, Yes | No),
            QueryType::MultiChoice => matches!(self, Option1 | Option2 | Option3),
            QueryType::Icon => matches!(self, IconActivate | No),
        }
    }

    /// Zero-based option index for multi-choice answers.
    pub fn option_index(self) -> Option<usize> {
        match self {
            ResponseValue::Option1 => Some(0),
            ResponseValue::Option2 => Some(1),
            ResponseValue::Option3 => Some(2),
            _ => None,
        }
    }

    /// Maps a yes/no style answer onto the prompt's vocabulary: icon
    /// prompts read "yes" as activating the icon.
    pub(crate) fn for_prompt(affirm: bool, query: QueryType) -> Option<ResponseValue> {
        match (query, affirm) {
            (QueryType::Binary, true) => Some(ResponseValue::Yes),
            (QueryType::Icon, true) => Some(ResponseValue::IconActivate),
            (QueryType::Binary | QueryType::Icon, false) => Some(ResponseValue::No),
            (QueryType::MultiChoice, _) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecognizedInput {
    pub modality: InputModality,
    pub value: ResponseValue,
    pub t: u64,
}

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn is_unit(v: Vec3) -> bool {
    v.iter().all(|c| c.is_finite()) && (norm(v) - 1.0).abs() <= 1e-6
}
