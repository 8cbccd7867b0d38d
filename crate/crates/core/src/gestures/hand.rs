//! Hand-pose classification from tracked joints.
//!
//! Joint layout (21 points): index 0 is the wrist, then four joints per
//! finger from base to tip, thumb first: thumb 1..=4, index 5..=8, middle
//! 9..=12, ring 13..=16, pinky 17..=20.
//!
//! A finger's three segment vectors come from its consecutive joints. Each
//! consecutive triplet contributes the dot product of its two normalized
//! segments; the finger is straight when the mean of those dots reaches
//! `finger_alignment_min`, and extended when it is also straight and its
//! tip-to-base distance reaches `finger_extension_ratio` of the summed
//! segment lengths.

use serde::{Deserialize, Serialize};

use super::{dot, is_unit, norm, sub, RecognizedInput, RecognizerConfig, ResponseValue, Vec3};
use crate::adaptation::InputModality;
use crate::recommendation::QueryType;

pub const JOINT_COUNT: usize = 21;
pub const WORLD_UP: Vec3 = [0.0, 1.0, 0.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandFrame {
    pub t: u64,
    /// Positions in metres; see the module docs for the layout.
    pub joints: Vec<Vec3>,
    pub palm_normal: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HandPose {
    One,
    Two,
    Three,
    ThumbsUp,
    ThumbsDown,
}

impl HandPose {
    pub fn response(self, prompt: QueryType) -> Option<ResponseValue> {
        let value = match self {
            HandPose::One => ResponseValue::Option1,
            HandPose::Two => ResponseValue::Option2,
            HandPose::Three => ResponseValue::Option3,
            HandPose::ThumbsUp => return ResponseValue::for_prompt(true, prompt),
            HandPose::ThumbsDown => return ResponseValue::for_prompt(false, prompt),
        };
        value.admitted_by(prompt).then_some(value)
    }
}

impl HandFrame {
    fn well_formed(&self) -> bool {
        self.joints.len() == JOINT_COUNT
            && self.joints.iter().flatten().all(|c| c.is_finite())
            && is_unit(self.palm_normal)
    }

    fn finger(&self, finger: usize) -> [Vec3; 4] {
        let base = 1 + 4 * finger;
        [
            self.joints[base],
            self.joints[base + 1],
            self.joints[base + 2],
            self.joints[base + 3],
        ]
    }
}

fn finger_extended(joints: &[Vec3; 4], cfg: &RecognizerConfig) -> bool {
    let segments = [
        sub(joints[1], joints[0]),
        sub(joints[2], joints[1]),
        sub(joints[3], joints[2]),
    ];
    let lengths = segments.map(norm);
    if lengths.iter().any(|&l| l <= f64::EPSILON) {
        return false;
    }
    let unit = |i: usize| segments[i].map(|c| c / lengths[i]);
    let alignment = (dot(unit(0), unit(1)) + dot(unit(1), unit(2))) / 2.0;
    let extension = norm(sub(joints[3], joints[0])) / lengths.iter().sum::<f64>();
    alignment >= cfg.finger_alignment_min && extension >= cfg.finger_extension_ratio
}

/// Pose shown in one frame, if any. `None` for malformed frames too.
pub fn frame_pose(frame: &HandFrame, cfg: &RecognizerConfig) -> Option<HandPose> {
    if !frame.well_formed() {
        return None;
    }
    let ext: Vec<bool> = (0..5)
        .map(|f| finger_extended(&frame.finger(f), cfg))
        .collect();
    match ext.as_slice() {
        [false, true, false, false, false] => Some(HandPose::One),
        [false, true, true, false, false] => Some(HandPose::Two),
        [false, true, true, true, false] => Some(HandPose::Three),
        [true, false, false, false, false] => {
            let [base, .., tip] = frame.finger(0);
            let v = sub(tip, base);
            let len = norm(v);
            let along_up = dot(v, WORLD_UP) / len;
            if along_up >= cfg.thumb_axis_min {
                Some(HandPose::ThumbsUp)
            } else if -along_up >= cfg.thumb_axis_min {
                Some(HandPose::ThumbsDown)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// First pose that stays legal for `prompt` for at least `hand_hold_ms`
/// across frames no more than `hand_sample_interval_ms` apart. Malformed
/// frames are skipped (and logged), which widens the gap around them.
pub fn classify_hand(
    frames: &[HandFrame],
    prompt: QueryType,
    cfg: &RecognizerConfig,
) -> Option<RecognizedInput> {
    let mut run: Option<(ResponseValue, u64)> = None;
    let mut last_t: Option<u64> = None;
    for frame in frames {
        if !frame.well_formed() {
            log::warn!("skipping malformed hand frame at t={}", frame.t);
            continue;
        }
        let gap_ok =
            last_t.is_some_and(|prev| frame.t.saturating_sub(prev) <= cfg.hand_sample_interval_ms);
        last_t = Some(frame.t);
        let value = frame_pose(frame, cfg).and_then(|p| p.response(prompt));
        run = match (value, run) {
            (None, _) => None,
            (Some(v), Some((current, start))) if v == current && gap_ok => Some((current, start)),
            (Some(v), _) => Some((v, frame.t)),
        };
        if let Some((value, start)) = run {
            if frame.t.saturating_sub(start) >= cfg.hand_hold_ms {
                return Some(RecognizedInput {
                    modality: InputModality::HandGesture,
                    value,
                    t: frame.t,
                });
            }
        }
    }
    None
}
