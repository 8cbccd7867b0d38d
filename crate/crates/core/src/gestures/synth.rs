//! Synthetic sensor traces with known ground truth, for tests, demos and
//! the bundled scenarios.

use super::{GazeSample, GazeTarget, HandFrame, HandPose, HeadPoseSample, ResponseValue, Vec3};
use crate::recommendation::QueryType;

/// Eye position used by the synthetic gaze rays and targets.
pub const EYE: Vec3 = [0.0, 1.6, 0.0];
const SEGMENT: f64 = 0.03;

/// `t0, t0 + step, ...` up to `t0 + duration`, always ending exactly there.
pub fn ticks(t0: u64, duration: u64, step: u64) -> Vec<u64> {
    let step = step.max(1);
    let mut out: Vec<u64> = (0..=duration / step).map(|k| t0 + k * step).collect();
    if out.last() != Some(&(t0 + duration)) {
        out.push(t0 + duration);
    }
    out
}

fn pose(t: u64, pitch: f64, yaw: f64, roll: f64) -> HeadPoseSample {
    HeadPoseSample {
        t,
        pitch,
        yaw,
        roll,
    }
}

pub fn head_still(t0: u64, duration: u64, step: u64) -> Vec<HeadPoseSample> {
    ticks(t0, duration, step)
        .into_iter()
        .map(|t| pose(t, 0.0, 0.0, 0.0))
        .collect()
}

#[derive(Clone, Copy)]
enum Axis {
    Pitch,
    Yaw,
}

/// Square wave: `reversals + 1` steps of ±`amplitude`, one every `step` ms,
/// then 1.6 s of stillness so any open oscillation window closes.
fn oscillate(
    t0: u64,
    reversals: u32,
    amplitude: f64,
    step: u64,
    axis: Axis,
) -> Vec<HeadPoseSample> {
    let mut out = Vec::new();
    let mut angle = 0.0;
    for k in 0..=u64::from(reversals) + 1 {
        angle = if k % 2 == 1 { amplitude } else { 0.0 };
        out.push(match axis {
            Axis::Pitch => pose(t0 + k * step, angle, 0.0, 0.0),
            Axis::Yaw => pose(t0 + k * step, 0.0, angle, 0.0),
        });
    }
    let end = out.last().map_or(t0, |s| s.t);
    for t in ticks(end, 1600, 30).into_iter().skip(1) {
        out.push(match axis {
            Axis::Pitch => pose(t, angle, 0.0, 0.0),
            Axis::Yaw => pose(t, 0.0, angle, 0.0),
        });
    }
    out
}

pub fn nod(t0: u64, reversals: u32, amplitude: f64, step: u64) -> Vec<HeadPoseSample> {
    oscillate(t0, reversals, amplitude, step, Axis::Pitch)
}

pub fn shake(t0: u64, reversals: u32, amplitude: f64, step: u64) -> Vec<HeadPoseSample> {
    oscillate(t0, reversals, amplitude, step, Axis::Yaw)
}

/// Ramp in two steps to `peak`, hold it for `hold` ms, then return to neutral.
fn tilt(
    t0: u64,
    peak: f64,
    hold: u64,
    step: u64,
    set: impl Fn(u64, f64) -> HeadPoseSample,
) -> Vec<HeadPoseSample> {
    let mut out = vec![
        set(t0, 0.0),
        set(t0 + step, peak / 3.0),
        set(t0 + 2 * step, 2.0 * peak / 3.0),
    ];
    let start = t0 + 3 * step;
    out.extend(ticks(start, hold, step).into_iter().map(|t| set(t, peak)));
    out.push(set(start + hold + step, 0.0));
    out
}

/// Positive roll tilts left, negative right.
pub fn tilt_roll(t0: u64, peak: f64, hold: u64, step: u64) -> Vec<HeadPoseSample> {
    tilt(t0, peak, hold, step, |t, a| pose(t, 0.0, 0.0, a))
}

/// Positive pitch tilts backward.
pub fn tilt_back(t0: u64, peak: f64, hold: u64, step: u64) -> Vec<HeadPoseSample> {
    tilt(t0, peak, hold, step, |t, a| pose(t, a, 0.0, 0.0))
}

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(v: Vec3, k: f64) -> Vec3 {
    v.map(|c| c * k)
}

fn straight(base: Vec3, dir: Vec3) -> [Vec3; 4] {
    let step = scale(dir, SEGMENT);
    let j1 = add(base, step);
    let j2 = add(j1, step);
    [base, j1, j2, add(j2, step)]
}

/// Three segments turning 90° twice: alignment 0.
fn curled(base: Vec3, dir: Vec3, toward_palm: Vec3) -> [Vec3; 4] {
    let j1 = add(base, scale(dir, SEGMENT));
    let j2 = add(j1, scale(toward_palm, SEGMENT));
    [base, j1, j2, add(j2, scale(dir, -SEGMENT))]
}

/// Unit segments at headings 0, θ, 2θ in the XY plane.
pub fn bent_finger(theta: f64) -> [Vec3; 4] {
    let j0 = [0.0, 0.0, 0.0];
    let j1 = add(j0, [1.0, 0.0, 0.0]);
    let j2 = add(j1, [theta.cos(), theta.sin(), 0.0]);
    [
        j0,
        j1,
        j2,
        add(j2, [(2.0 * theta).cos(), (2.0 * theta).sin(), 0.0]),
    ]
}

/// A right hand, palm facing -Z, showing `pose` (all fingers curled for `None`).
pub fn hand_frame(t: u64, pose: Option<HandPose>) -> HandFrame {
    const UP: Vec3 = [0.0, 1.0, 0.0];
    const DOWN: Vec3 = [0.0, -1.0, 0.0];
    const PALM: Vec3 = [0.0, 0.0, -1.0];
    let extended: [bool; 4] = match pose {
        Some(HandPose::One) => [true, false, false, false],
        Some(HandPose::Two) => [true, true, false, false],
        Some(HandPose::Three) => [true, true, true, false],
        _ => [false; 4],
    };
    let thumb_base = [-0.045, 0.03, 0.0];
    let thumb = match pose {
        Some(HandPose::ThumbsUp) => straight(thumb_base, UP),
        Some(HandPose::ThumbsDown) => straight(thumb_base, DOWN),
        _ => curled(thumb_base, [1.0, 0.0, 0.0], PALM),
    };
    let mut joints = vec![[0.0, 0.0, 0.0]];
    joints.extend(thumb);
    for (i, ext) in extended.iter().enumerate() {
        let base = [-0.03 + 0.02 * i as f64, 0.09, 0.0];
        joints.extend(if *ext {
            straight(base, UP)
        } else {
            curled(base, UP, PALM)
        });
    }
    HandFrame {
        t,
        joints,
        palm_normal: PALM,
    }
}

pub fn hand_hold(t0: u64, pose: HandPose, hold: u64, step: u64) -> Vec<HandFrame> {
    ticks(t0, hold, step)
        .into_iter()
        .map(|t| hand_frame(t, Some(pose)))
        .collect()
}

/// One target per legal answer, laid out left to right 2 m in front of the eye.
pub fn option_targets(prompt: QueryType) -> Vec<GazeTarget> {
    let values: &[(&str, ResponseValue)] = match prompt {
        QueryType::Binary => &[("yes", ResponseValue::Yes), ("no", ResponseValue::No)],
        QueryType::MultiChoice => &[
            ("option1", ResponseValue::Option1),
            ("option2", ResponseValue::Option2),
            ("option3", ResponseValue::Option3),
        ],
        QueryType::Icon => &[
            ("icon", ResponseValue::IconActivate),
            ("dismiss", ResponseValue::No),
        ],
    };
    values
        .iter()
        .enumerate()
        .map(|(i, (label, value))| {
            let x = -0.5 + 0.5 * i as f64;
            GazeTarget {
                label: label.to_string(),
                value: *value,
                min: [x - 0.2, EYE[1] - 0.15, -2.1],
                max: [x + 0.2, EYE[1] + 0.15, -2.0],
            }
        })
        .collect()
}

fn unit(v: Vec3) -> Vec3 {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    scale(v, 1.0 / n)
}

/// Constant ray from the eye to the centre of `target`.
pub fn gaze_at(t0: u64, target: &GazeTarget, duration: u64, step: u64) -> Vec<GazeSample> {
    let centre = scale(add(target.min, target.max), 0.5);
    let direction = unit([centre[0] - EYE[0], centre[1] - EYE[1], centre[2] - EYE[2]]);
    ticks(t0, duration, step)
        .into_iter()
        .map(|t| GazeSample {
            t,
            origin: EYE,
            direction,
        })
        .collect()
}

/// Looking straight up, away from every target.
pub fn gaze_away(t0: u64, duration: u64, step: u64) -> Vec<GazeSample> {
    ticks(t0, duration, step)
        .into_iter()
        .map(|t| GazeSample {
            t,
            origin: EYE,
            direction: [0.0, 1.0, 0.0],
        })
        .collect()
}
