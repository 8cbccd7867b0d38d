//! Recognizer thresholds.
//!
//! | field | default | meaning |
//! |---|---|---|
//! | `head_velocity_threshold` | 0.05 rad | minimum per-sample angular change that counts as motion |
//! | `head_reversals_min` / `_max` | 3 / 4 | direction reversals that confirm a nod or shake |
//! | `head_window_ms` | 1500 | window in which the reversals must fall |
//! | `tilt_lateral_threshold` | 0.3 rad | roll beyond which a tilt selects option 1 (left) or 2 (right) |
//! | `tilt_back_threshold` | 0.4 rad | backward pitch beyond which option 3 is selected |
//! | `tilt_sustain_ms` | 300 | how long a tilt must be held |
//! | `finger_alignment_min` | 0.9 | mean dot product of consecutive finger segments for "straight" |
//! | `finger_extension_ratio` | 0.8 | tip-to-base distance over summed segment length for "extended" |
//! | `thumb_axis_min` | 0.7 | thumb direction · world up/down for thumbs up/down |
//! | `hand_hold_ms` | 1000 | how long a hand pose must persist |
//! | `hand_sample_interval_ms` | 30 | largest gap between frames that keeps a hold alive |
//! | `gaze_dwell_ms` | 3500 | dwell time that selects a gaze target |
//! | `voice_confidence_min` | 0.7 | transcripts below this confidence are dropped |
//!
//! Gaze dwell defaults to 3.5 s, long enough that reading an option does
//! not select it. Dwell buttons that fire after one second of holding still
//! are the other common setting; set `gaze_dwell_ms` to 1000 for that.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid recognizer config: {0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecognizerConfig {
    pub head_velocity_threshold: f64,
    pub head_reversals_min: u32,
    pub head_reversals_max: u32,
    pub head_window_ms: u64,
    pub tilt_lateral_threshold: f64,
    pub tilt_back_threshold: f64,
    pub tilt_sustain_ms: u64,
    pub finger_alignment_min: f64,
    pub finger_extension_ratio: f64,
    pub thumb_axis_min: f64,
    pub hand_hold_ms: u64,
    pub hand_sample_interval_ms: u64,
    pub gaze_dwell_ms: u64,
    pub voice_confidence_min: f64,
}

impl Default for RecognizerConfig {
    fn default() -> Self {
        RecognizerConfig {
            head_velocity_threshold: 0.05,
            head_reversals_min: 3,
            head_reversals_max: 4,
            head_window_ms: 1500,
            tilt_lateral_threshold: 0.3,
            tilt_back_threshold: 0.4,
            tilt_sustain_ms: 300,
            finger_alignment_min: 0.9,
            finger_extension_ratio: 0.8,
            thumb_axis_min: 0.7,
            hand_hold_ms: 1000,
            hand_sample_interval_ms: 30,
            gaze_dwell_ms: 3500,
            voice_confidence_min: 0.7,
        }
    }
}

impl RecognizerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let floats = [
            ("head_velocity_threshold", self.head_velocity_threshold),
            ("tilt_lateral_threshold", self.tilt_lateral_threshold),
            ("tilt_back_threshold", self.tilt_back_threshold),
            ("finger_alignment_min", self.finger_alignment_min),
            ("finger_extension_ratio", self.finger_extension_ratio),
            ("thumb_axis_min", self.thumb_axis_min),
            ("voice_confidence_min", self.voice_confidence_min),
        ];
        for (name, v) in floats {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError(format!("{name} must be > 0")));
            }
        }
        let ints = [
            ("head_reversals_min", u64::from(self.head_reversals_min)),
            ("head_window_ms", self.head_window_ms),
            ("tilt_sustain_ms", self.tilt_sustain_ms),
            ("hand_hold_ms", self.hand_hold_ms),
            ("hand_sample_interval_ms", self.hand_sample_interval_ms),
            ("gaze_dwell_ms", self.gaze_dwell_ms),
        ];
        for (name, v) in ints {
            if v == 0 {
                return Err(ConfigError(format!("{name} must be > 0")));
            }
        }
        if self.head_reversals_min > self.head_reversals_max {
            return Err(ConfigError(
                "head_reversals_min must not exceed head_reversals_max".into(),
            ));
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: RecognizerConfig =
            serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}
