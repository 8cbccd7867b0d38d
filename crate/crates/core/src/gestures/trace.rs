//! Line-delimited JSON sensor traces.
//!
//! Each line holds one sample or event and a `"stream"` discriminator:
//!
//! ```text
//! {"stream":"head","t":0,"pitch":0.0,"yaw":0.0,"roll":0.0}
//! {"stream":"voice","t":450,"kind":"transcript","transcript":"yes","confidence":0.92}
//! ```
//!
//! Timestamps are milliseconds from the start of the trace and must
//! strictly increase within each stream. Blank lines are ignored.

use serde::{Deserialize, Serialize};

use super::{GazeSample, HandFrame, HeadPoseSample, VoiceEvent};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("trace line {line}: {message}")]
pub struct TraceError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "stream", rename_all = "lowercase")]
pub enum TraceRecord {
    Head(HeadPoseSample),
    Hand(HandFrame),
    Gaze(GazeSample),
    Voice(VoiceEvent),
}

impl TraceRecord {
    pub fn t(&self) -> u64 {
        match self {
            TraceRecord::Head(s) => s.t,
            TraceRecord::Hand(f) => f.t,
            TraceRecord::Gaze(s) => s.t,
            TraceRecord::Voice(e) => e.t,
        }
    }

    fn stream_rank(&self) -> u8 {
        match self {
            TraceRecord::Head(_) => 0,
            TraceRecord::Hand(_) => 1,
            TraceRecord::Gaze(_) => 2,
            TraceRecord::Voice(_) => 3,
        }
    }
}

/// A recorded session split by stream.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SensorTrace {
    pub head: Vec<HeadPoseSample>,
    pub hand: Vec<HandFrame>,
    pub gaze: Vec<GazeSample>,
    pub voice: Vec<VoiceEvent>,
}

impl SensorTrace {
    pub fn is_empty(&self) -> bool {
        self.head.is_empty()
            && self.hand.is_empty()
            && self.gaze.is_empty()
            && self.voice.is_empty()
    }

    pub fn push(&mut self, record: TraceRecord) {
        match record {
            TraceRecord::Head(s) => self.head.push(s),
            TraceRecord::Hand(f) => self.hand.push(f),
            TraceRecord::Gaze(s) => self.gaze.push(s),
            TraceRecord::Voice(e) => self.voice.push(e),
        }
    }

    pub fn parse_jsonl(text: &str) -> Result<Self, TraceError> {
        let mut builder = Builder::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: TraceRecord = serde_json::from_str(line).map_err(|e| TraceError {
                line: i + 1,
                message: e.to_string(),
            })?;
            builder.add(i + 1, record)?;
        }
        Ok(builder.trace)
    }

    /// Builds a trace from records in arrival order, with the same checks
    /// as [`SensorTrace::parse_jsonl`]. Error positions count records from 1.
    pub fn from_records(
        records: impl IntoIterator<Item = TraceRecord>,
    ) -> Result<Self, TraceError> {
        let mut builder = Builder::default();
        for (i, record) in records.into_iter().enumerate() {
            builder.add(i + 1, record)?;
        }
        Ok(builder.trace)
    }

    /// All records merged by time; ties keep head, hand, gaze, voice order.
    pub fn records(&self) -> Vec<TraceRecord> {
        let mut out: Vec<TraceRecord> = self
            .head
            .iter()
            .copied()
            .map(TraceRecord::Head)
            .chain(self.hand.iter().cloned().map(TraceRecord::Hand))
            .chain(self.gaze.iter().copied().map(TraceRecord::Gaze))
            .chain(self.voice.iter().cloned().map(TraceRecord::Voice))
            .collect();
        out.sort_by_key(|r| (r.t(), r.stream_rank()));
        out
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in self.records() {
            out.push_str(&serde_json::to_string(&record).expect("trace records always serialize"));
            out.push('\n');
        }
        out
    }

    pub fn load(path: &std::path::Path) -> Result<Self, TraceError> {
        let text = std::fs::read_to_string(path).map_err(|e| TraceError {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse_jsonl(&text)
    }
}

#[derive(Default)]
struct Builder {
    trace: SensorTrace,
    last: [Option<u64>; 4],
}

impl Builder {
    fn add(&mut self, line: usize, record: TraceRecord) -> Result<(), TraceError> {
        let err = |message: String| TraceError { line, message };
        if let TraceRecord::Voice(e) = &record {
            e.validate().map_err(err)?;
        }
        let rank = usize::from(record.stream_rank());
        if let Some(prev) = self.last[rank] {
            if record.t() <= prev {
                return Err(err(format!(
                    "timestamp {} does not follow {prev} in its stream",
                    record.t()
                )));
            }
        }
        self.last[rank] = Some(record.t());
        self.trace.push(record);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::gestures::synth;
    use crate::gestures::{HandPose, Nlcs};
    use crate::recommendation::QueryType;

    #[test]
    fn parses_each_stream() {
        let text = r#"
{"stream":"head","t":0,"pitch":0.0,"yaw":0.0,"roll":0.0}
{"stream":"voice","t":450,"kind":"transcript","transcript":"yes","confidence":0.92}
{"stream":"voice","t":460,"kind":"nlcs_label","nlcs":"affirm","confidence":0.8}
{"stream":"gaze","t":30,"origin":[0.0,1.6,0.0],"direction":[0.0,0.0,-1.0]}
"#;
        let trace = SensorTrace::parse_jsonl(text).unwrap();
        assert_eq!(
            (trace.head.len(), trace.gaze.len(), trace.voice.len()),
            (1, 1, 2)
        );
        assert_eq!(trace.voice[1].nlcs, Some(Nlcs::Affirm));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = SensorTrace::parse_jsonl(
            "{\"stream\":\"head\",\"t\":0,\"pitch\":0,\"yaw\":0,\"roll\":0}\n{\"stream\":\"nose\"}",
        )
        .unwrap_err();
        assert_eq!(err.line, 2);
        let err = SensorTrace::parse_jsonl(
            "{\"stream\":\"head\",\"t\":5,\"pitch\":0,\"yaw\":0,\"roll\":0}\n{\"stream\":\"head\",\"t\":5,\"pitch\":0,\"yaw\":0,\"roll\":0}",
        )
        .unwrap_err();
        assert_eq!(err.line, 2);
        let err = SensorTrace::parse_jsonl(
            r#"{"stream":"voice","t":1,"kind":"transcript","confidence":0.9}"#,
        )
        .unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn synthetic_trace_round_trips() {
        let mut trace = SensorTrace {
            head: synth::nod(0, 4, 0.1, 100),
            hand: synth::hand_hold(0, HandPose::Two, 1000, 30),
            ..Default::default()
        };
        let targets = synth::option_targets(QueryType::MultiChoice);
        trace.gaze = synth::gaze_at(0, &targets[2], 3600, 30);
        trace
            .voice
            .push(crate::gestures::VoiceEvent::transcript(700, "three", 0.81));
        let text = trace.to_jsonl();
        let back = SensorTrace::parse_jsonl(&text).unwrap();
        assert_eq!(back, trace);
        assert_eq!(back.to_jsonl(), text);
    }

    proptest! {
        /// Arbitrary finite floats survive parse → serialize → parse bit for bit.
        #[test]
        fn floats_round_trip_bit_exact(
            angles in proptest::collection::vec((any::<f64>(), any::<f64>(), any::<f64>()), 1..20),
            conf in 0.0f64..=1.0,
        ) {
            let mut trace = SensorTrace::default();
            for (i, (p, y, r)) in angles.into_iter().enumerate() {
                let fix = |v: f64| if v.is_finite() { v } else { 0.0 };
                trace.head.push(HeadPoseSample { t: i as u64 * 30, pitch: fix(p), yaw: fix(y), roll: fix(r) });
            }
            trace.voice.push(crate::gestures::VoiceEvent::transcript(3, "one", conf));
            let once = SensorTrace::parse_jsonl(&trace.to_jsonl()).unwrap();
            let twice = SensorTrace::parse_jsonl(&once.to_jsonl()).unwrap();
            for (a, b) in trace.head.iter().zip(&twice.head) {
                prop_assert_eq!(a.pitch.to_bits(), b.pitch.to_bits());
                prop_assert_eq!(a.yaw.to_bits(), b.yaw.to_bits());
                prop_assert_eq!(a.roll.to_bits(), b.roll.to_bits());
            }
            prop_assert_eq!(trace.voice[0].confidence.to_bits(), twice.voice[0].confidence.to_bits());
            prop_assert_eq!(once, twice);
        }
    }

    #[test]
    fn from_records_checks_order() {
        let head = |t| {
            TraceRecord::Head(HeadPoseSample {
                t,
                pitch: 0.0,
                yaw: 0.0,
                roll: 0.0,
            })
        };
        let trace = SensorTrace::from_records([head(0), head(10)]).unwrap();
        assert_eq!(trace.head.len(), 2);
        let err = SensorTrace::from_records([head(10), head(10)]).unwrap_err();
        assert_eq!(err.line, 2);
    }
}
