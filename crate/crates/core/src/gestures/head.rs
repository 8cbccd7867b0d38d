//! Head gestures from rotational head pose.
//!
//! Binary and icon prompts listen for oscillation: a nod on the pitch axis
//! means yes, a shake on the yaw axis means no. Multi-choice prompts listen
//! for a held tilt: roll to the left (positive) selects option 1, to the
//! right (negative) option 2, and a backward pitch (positive) option 3.

use serde::{Deserialize, Serialize};

use super::{RecognizedInput, RecognizerConfig, ResponseValue};
use crate::adaptation::InputModality;
use crate::recommendation::QueryType;

/// Angles in radians relative to the calibrated neutral pose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeadPoseSample {
    pub t: u64,
    pub pitch: f64,
    pub yaw: f64,
    pub roll: f64,
}

pub fn detect_head_gesture(
    trace: &[HeadPoseSample],
    prompt: QueryType,
    cfg: &RecognizerConfig,
) -> Option<RecognizedInput> {
    let (value, t) = match prompt {
        QueryType::MultiChoice => detect_tilt(trace, cfg)?,
        QueryType::Binary | QueryType::Icon => {
            let nod = oscillation(trace, |s| s.pitch, cfg);
            let shake = oscillation(trace, |s| s.yaw, cfg);
            let (affirm, t) = match (nod, shake) {
                (Some(n), Some(s)) if s < n => (false, s),
                (Some(n), _) => (true, n),
                (None, Some(s)) => (false, s),
                (None, None) => return None,
            };
            (ResponseValue::for_prompt(affirm, prompt)?, t)
        }
    };
    Some(RecognizedInput {
        modality: InputModality::HeadGesture,
        value,
        t,
    })
}

struct Episode {
    start: u64,
    last_positive: bool,
    reversals: u32,
}

/// Time at which an oscillation on one axis is confirmed.
///
/// An episode opens at the first counted delta and closes once a sample
/// arrives past the window (or the trace ends). It is confirmed if the
/// number of sign reversals it collected lies in the configured range;
/// otherwise it is discarded and the next counted delta opens a new one.
fn oscillation(
    trace: &[HeadPoseSample],
    angle: impl Fn(&HeadPoseSample) -> f64,
    cfg: &RecognizerConfig,
) -> Option<u64> {
    let confirmed =
        |e: &Episode| (cfg.head_reversals_min..=cfg.head_reversals_max).contains(&e.reversals);
    let mut episode: Option<Episode> = None;
    for pair in trace.windows(2) {
        let t = pair[1].t;
        let delta = angle(&pair[1]) - angle(&pair[0]);
        if let Some(e) = &episode {
            if t > e.start + cfg.head_window_ms {
                if confirmed(e) {
                    return Some(t);
                }
                episode = None;
            }
        }
        if delta.abs() < cfg.head_velocity_threshold {
            continue;
        }
        let positive = delta > 0.0;
        match &mut episode {
            None => {
                episode = Some(Episode {
                    start: t,
                    last_positive: positive,
                    reversals: 0,
                })
            }
            Some(e) => {
                if positive != e.last_positive {
                    e.reversals += 1;
                    e.last_positive = positive;
                }
            }
        }
    }
    match (episode, trace.last()) {
        (Some(e), Some(last)) if confirmed(&e) => Some(last.t),
        _ => None,
    }
}

fn tilt_class(s: &HeadPoseSample, cfg: &RecognizerConfig) -> Option<ResponseValue> {
    if s.roll > cfg.tilt_lateral_threshold {
        Some(ResponseValue::Option1)
    } else if s.roll < -cfg.tilt_lateral_threshold {
        Some(ResponseValue::Option2)
    } else if s.pitch > cfg.tilt_back_threshold {
        Some(ResponseValue::Option3)
    } else {
        None
    }
}

fn detect_tilt(trace: &[HeadPoseSample], cfg: &RecognizerConfig) -> Option<(ResponseValue, u64)> {
    let mut run: Option<(ResponseValue, u64)> = None;
    for s in trace {
        match (tilt_class(s, cfg), run) {
            (None, _) => run = None,
            (Some(c), Some((current, start))) if c == current => {
                if s.t.saturating_sub(start) >= cfg.tilt_sustain_ms {
                    return Some((c, s.t));
                }
            }
            (Some(c), _) => {
                run = Some((c, s.t));
                if cfg.tilt_sustain_ms == 0 {
                    return Some((c, s.t));
                }
            }
        }
    }
    None
}
