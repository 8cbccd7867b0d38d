//! Bounded-vocabulary voice answers and non-lexical conversational sounds
//! ("uh-huh", "mm-mm").
//!
//! Speech-to-text and the sound classifier run upstream; this module only
//! sees their labelled output.

use serde::{Deserialize, Serialize};

use super::{RecognizedInput, RecognizerConfig, ResponseValue};
use crate::adaptation::InputModality;
use crate::recommendation::QueryType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoiceKind {
    Transcript,
    NlcsLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nlcs {
    Affirm,
    Negate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoiceEvent {
    pub t: u64,
    pub kind: VoiceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nlcs: Option<Nlcs>,
    pub confidence: f64,
}

impl VoiceEvent {
    pub fn transcript(t: u64, text: impl Into<String>, confidence: f64) -> Self {
        VoiceEvent {
            t,
            kind: VoiceKind::Transcript,
            transcript: Some(text.into()),
            nlcs: None,
            confidence,
        }
    }

    pub fn nlcs(t: u64, label: Nlcs, confidence: f64) -> Self {
        VoiceEvent {
            t,
            kind: VoiceKind::NlcsLabel,
            transcript: None,
            nlcs: Some(label),
            confidence,
        }
    }

    /// Exactly the payload matching `kind`, and a confidence in [0, 1].
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.confidence) {
            return Err(format!("confidence {} outside [0, 1]", self.confidence));
        }
        match (self.kind, &self.transcript, &self.nlcs) {
            (VoiceKind::Transcript, Some(_), None) | (VoiceKind::NlcsLabel, None, Some(_)) => {
                Ok(())
            }
            (VoiceKind::Transcript, _, _) => {
                Err("transcript event needs a transcript and no nlcs label".into())
            }
            (VoiceKind::NlcsLabel, _, _) => {
                Err("nlcs event needs an nlcs label and no transcript".into())
            }
        }
    }
}

fn word_value(word: &str, prompt: QueryType) -> Option<ResponseValue> {
    match (word, prompt) {
        ("yes", _) => ResponseValue::for_prompt(true, prompt),
        ("no", _) => ResponseValue::for_prompt(false, prompt),
        ("one", QueryType::MultiChoice) => Some(ResponseValue::Option1),
        ("two", QueryType::MultiChoice) => Some(ResponseValue::Option2),
        ("three", QueryType::MultiChoice) => Some(ResponseValue::Option3),
        _ => None,
    }
}

/// First vocabulary word in `text`, matched case-insensitively as a whole
/// token bounded by non-letters or the string edges.
pub fn match_transcript(text: &str, prompt: QueryType) -> Option<ResponseValue> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|w| !w.is_empty())
        .find_map(|w| word_value(&w.to_lowercase(), prompt))
}

pub fn match_voice(
    events: &[VoiceEvent],
    prompt: QueryType,
    cfg: &RecognizerConfig,
) -> Option<RecognizedInput> {
    events.iter().find_map(|e| {
        if let Err(reason) = e.validate() {
            log::warn!("skipping voice event at t={}: {reason}", e.t);
            return None;
        }
        let value = match e.kind {
            VoiceKind::Transcript => {
                if e.confidence < cfg.voice_confidence_min {
                    return None;
                }
                match_transcript(e.transcript.as_deref()?, prompt)?
            }
            VoiceKind::NlcsLabel => {
                if prompt != QueryType::Binary {
                    return None;
                }
                match e.nlcs? {
                    Nlcs::Affirm => ResponseValue::Yes,
                    Nlcs::Negate => ResponseValue::No,
                }
            }
        };
        Some(RecognizedInput {
            modality: InputModality::Voice,
            value,
            t: e.t,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(events: &[VoiceEvent], prompt: QueryType) -> Option<ResponseValue> {
        match_voice(events, prompt, &RecognizerConfig::default()).map(|r| r.value)
    }

    #[test]
    fn whole_words_only() {
        for q in [QueryType::Binary, QueryType::MultiChoice] {
            assert_eq!(run(&[VoiceEvent::transcript(0, "someone", 0.9)], q), None);
        }
        assert_eq!(
            run(
                &[VoiceEvent::transcript(0, "nothing", 0.9)],
                QueryType::Binary
            ),
            None
        );
        assert_eq!(
            run(
                &[VoiceEvent::transcript(0, "Yes, please", 0.9)],
                QueryType::Binary
            ),
            Some(ResponseValue::Yes)
        );
        assert_eq!(
            run(
                &[VoiceEvent::transcript(0, "option-TWO!", 0.9)],
                QueryType::MultiChoice
            ),
            Some(ResponseValue::Option2)
        );
        assert_eq!(
            run(&[VoiceEvent::transcript(0, "no2", 0.9)], QueryType::Binary),
            Some(ResponseValue::No)
        );
    }

    #[test]
    fn confidence_boundary() {
        let q = QueryType::MultiChoice;
        assert_eq!(run(&[VoiceEvent::transcript(0, "one", 0.6)], q), None);
        assert_eq!(run(&[VoiceEvent::transcript(0, "one", 0.69999)], q), None);
        assert_eq!(
            run(&[VoiceEvent::transcript(0, "one", 0.7)], q),
            Some(ResponseValue::Option1)
        );
        assert_eq!(
            run(&[VoiceEvent::transcript(0, "one", 0.8)], q),
            Some(ResponseValue::Option1)
        );
    }

    #[test]
    fn nlcs_only_for_binary() {
        let affirm = [VoiceEvent::nlcs(10, Nlcs::Affirm, 0.9)];
        assert_eq!(run(&affirm, QueryType::Binary), Some(ResponseValue::Yes));
        assert_eq!(run(&affirm, QueryType::MultiChoice), None);
        assert_eq!(run(&affirm, QueryType::Icon), None);
        assert_eq!(
            run(
                &[VoiceEvent::nlcs(10, Nlcs::Negate, 0.9)],
                QueryType::Binary
            ),
            Some(ResponseValue::No)
        );
    }

    #[test]
    fn icon_vocabulary() {
        assert_eq!(
            run(&[VoiceEvent::transcript(0, "yes", 0.9)], QueryType::Icon),
            Some(ResponseValue::IconActivate)
        );
        assert_eq!(
            run(&[VoiceEvent::transcript(0, "no", 0.9)], QueryType::Icon),
            Some(ResponseValue::No)
        );
        assert_eq!(
            run(&[VoiceEvent::transcript(0, "one", 0.9)], QueryType::Icon),
            None
        );
    }

    #[test]
    fn first_match_wins() {
        let events = [
            VoiceEvent::transcript(100, "hmm", 0.9),
            VoiceEvent::transcript(200, "two", 0.5),
            VoiceEvent::transcript(300, "three then one", 0.9),
            VoiceEvent::transcript(400, "one", 0.9),
        ];
        let r = match_voice(
            &events,
            QueryType::MultiChoice,
            &RecognizerConfig::default(),
        )
        .unwrap();
        assert_eq!((r.value, r.t), (ResponseValue::Option3, 300));
    }

    #[test]
    fn malformed_events_are_skipped() {
        let mut bad = VoiceEvent::transcript(0, "yes", 0.9);
        bad.nlcs = Some(Nlcs::Negate);
        assert!(bad.validate().is_err());
        assert_eq!(
            run(
                &[bad, VoiceEvent::transcript(5, "no", 0.9)],
                QueryType::Binary
            ),
            Some(ResponseValue::No)
        );
    }
}
