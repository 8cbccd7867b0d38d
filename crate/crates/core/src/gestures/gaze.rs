//! Gaze dwell selection. Gaze is approximated by a head-orientation ray;
//! selectable targets are axis-aligned boxes in the same reference frame.

use serde::{Deserialize, Serialize};

use super::{is_unit, RecognizedInput, RecognizerConfig, ResponseValue, Vec3};
use crate::adaptation::InputModality;
use crate::recommendation::QueryType;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GazeSample {
    pub t: u64,
    pub origin: Vec3,
    /// Unit vector.
    pub direction: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GazeTarget {
    pub label: String,
    /// Answer given by dwelling on this target.
    pub value: ResponseValue,
    pub min: Vec3,
    pub max: Vec3,
}

impl GazeTarget {
    /// Distance along the ray to the box, if the ray hits it in front of
    /// the origin (slab method).
    pub fn hit(&self, origin: Vec3, direction: Vec3) -> Option<f64> {
        let mut near = 0.0f64;
        let mut far = f64::INFINITY;
        for axis in 0..3 {
            let (o, d) = (origin[axis], direction[axis]);
            let (lo, hi) = (self.min[axis], self.max[axis]);
            if d.abs() < 1e-12 {
                if o < lo || o > hi {
                    return None;
                }
                continue;
            }
            let (a, b) = ((lo - o) / d, (hi - o) / d);
            near = near.max(a.min(b));
            far = far.min(a.max(b));
            if near > far {
                return None;
            }
        }
        Some(near)
    }
}

/// Nearest target hit by a sample's ray.
fn hit_target(sample: &GazeSample, targets: &[GazeTarget]) -> Option<usize> {
    targets
        .iter()
        .enumerate()
        .filter_map(|(i, target)| target.hit(sample.origin, sample.direction).map(|d| (i, d)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

/// First target whose uninterrupted dwell reaches `gaze_dwell_ms`, with the
/// time it did. Samples with a non-unit direction are ignored.
pub fn detect_gaze_dwell(
    samples: &[GazeSample],
    targets: &[GazeTarget],
    cfg: &RecognizerConfig,
) -> Option<(String, u64)> {
    dwell(samples, targets, cfg, |_| true).map(|(i, t)| (targets[i].label.clone(), t))
}

fn dwell(
    samples: &[GazeSample],
    targets: &[GazeTarget],
    cfg: &RecognizerConfig,
    eligible: impl Fn(&GazeTarget) -> bool,
) -> Option<(usize, u64)> {
    let mut run: Option<(usize, u64)> = None;
    for sample in samples {
        if !is_unit(sample.direction) {
            log::warn!(
                "skipping gaze sample with non-unit direction at t={}",
                sample.t
            );
            continue;
        }
        let hit = hit_target(sample, targets).filter(|&i| eligible(&targets[i]));
        run = match (hit, run) {
            (None, _) => None,
            (Some(i), Some((current, start))) if i == current => Some((current, start)),
            (Some(i), _) => Some((i, sample.t)),
        };
        if let Some((i, start)) = run {
            if sample.t.saturating_sub(start) >= cfg.gaze_dwell_ms {
                return Some((i, sample.t));
            }
        }
    }
    None
}

/// Gaze dwell as an answer to `prompt`. Targets whose value is not legal
/// for the prompt cannot be selected.
pub fn gaze_input(
    samples: &[GazeSample],
    targets: &[GazeTarget],
    prompt: QueryType,
    cfg: &RecognizerConfig,
) -> Option<RecognizedInput> {
    dwell(samples, targets, cfg, |t| t.value.admitted_by(prompt)).map(|(i, t)| RecognizedInput {
        modality: InputModality::Gaze,
        value: targets[i].value,
        t,
    })
}
