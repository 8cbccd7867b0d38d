//! The "how" pipeline: final presentation strategy and input gating.
//!
//! The backend proposes a presentation modality; [`resolve_presentation`]
//! lets the context override it. [`gate_inputs`] then removes every input
//! channel the user's situational impairments rule out.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::context::{ContextSnapshot, NoiseLevel, SiidFlags, Situation};
use crate::recommendation::policy::PolicyRule;
use crate::recommendation::{AgentSuggestion, PresentationModality, QueryType};
use crate::vocab::vocab;

vocab! {
    /// Channel through which the user can answer a prompt.
    pub enum InputModality: "input modality" {
        Gaze = "gaze",
        HandGesture = "hand_gesture" | "hand",
        HeadGesture = "head_gesture" | "head",
        Voice = "voice",
    }
}

pub const REASON_NOISY: &str = "noisy environment";
pub const REASON_SPEECH: &str = "speech inappropriate";
pub const REASON_HANDS: &str = "hands occupied";
pub const REASON_AUDIO_ONLY: &str = "audio-only presentation";
pub const REASON_EYES: &str = "eyes occupied";
pub const REASON_CONFIG: &str = "disabled by configuration";
pub const REASON_FALLBACK: &str = "fallback";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateNote {
    pub modality: InputModality,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GatingConfig {
    /// Turns head gestures off unless nothing else is left.
    pub head_disabled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionPlan {
    pub presentation: PresentationModality,
    pub query_type: QueryType,
    pub enabled_inputs: BTreeSet<InputModality>,
    pub suppressed: Vec<GateNote>,
    /// Modalities put back because gating would otherwise leave none.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restored: Vec<GateNote>,
}

impl InteractionPlan {
    pub fn is_enabled(&self, modality: InputModality) -> bool {
        self.enabled_inputs.contains(&modality)
    }

    pub fn suppression_reason(&self, modality: InputModality) -> Option<&str> {
        self.suppressed
            .iter()
            .find(|n| n.modality == modality)
            .map(|n| n.reason.as_str())
    }

    /// Checks the structural invariants: enabled and suppressed partition
    /// the four modalities, the enabled set is non-empty, and audio-only
    /// presentation never leaves gaze enabled.
    pub fn check(&self) -> Result<(), String> {
        if self.enabled_inputs.is_empty() {
            return Err("no input modality enabled".into());
        }
        let suppressed: BTreeSet<_> = self.suppressed.iter().map(|n| n.modality).collect();
        if suppressed.len() != self.suppressed.len() {
            return Err("modality suppressed twice".into());
        }
        if !suppressed.is_disjoint(&self.enabled_inputs) {
            return Err("modality both enabled and suppressed".into());
        }
        if suppressed.len() + self.enabled_inputs.len() != InputModality::ALL.len() {
            return Err("enabled and suppressed do not cover every modality".into());
        }
        if self.presentation == PresentationModality::AudioOnly
            && self.is_enabled(InputModality::Gaze)
        {
            return Err("gaze enabled under audio-only presentation".into());
        }
        Ok(())
    }
}

/// Gates input modalities with the default configuration.
pub fn gate_inputs(
    siids: SiidFlags,
    presentation: PresentationModality,
    query_type: QueryType,
) -> InteractionPlan {
    gate_inputs_with(siids, presentation, query_type, &GatingConfig::default())
}

pub fn gate_inputs_with(
    siids: SiidFlags,
    presentation: PresentationModality,
    query_type: QueryType,
    cfg: &GatingConfig,
) -> InteractionPlan {
    let mut suppressed = Vec::new();
    let mut suppress = |modality, reason: String| suppressed.push(GateNote { modality, reason });

    let mut gaze_reasons = Vec::new();
    if presentation == PresentationModality::AudioOnly {
        gaze_reasons.push(REASON_AUDIO_ONLY);
    }
    if siids.vision_impaired {
        gaze_reasons.push(REASON_EYES);
    }
    if !gaze_reasons.is_empty() {
        suppress(InputModality::Gaze, gaze_reasons.join("; "));
    }
    if siids.hands_impaired {
        suppress(InputModality::HandGesture, REASON_HANDS.into());
    }
    if cfg.head_disabled {
        suppress(InputModality::HeadGesture, REASON_CONFIG.into());
    }
    if siids.voice_impaired {
        let reason = if siids.hearing_impaired {
            REASON_NOISY
        } else {
            REASON_SPEECH
        };
        suppress(InputModality::Voice, reason.into());
    }

    let off: BTreeSet<_> = suppressed.iter().map(|n| n.modality).collect();
    let mut enabled: BTreeSet<_> = InputModality::ALL
        .iter()
        .copied()
        .filter(|m| !off.contains(m))
        .collect();
    let mut restored = Vec::new();
    if enabled.is_empty() {
        suppressed.retain(|n| n.modality != InputModality::HeadGesture);
        enabled.insert(InputModality::HeadGesture);
        restored.push(GateNote {
            modality: InputModality::HeadGesture,
            reason: REASON_FALLBACK.into(),
        });
    }
    InteractionPlan {
        presentation,
        query_type,
        enabled_inputs: enabled,
        suppressed,
        restored,
    }
}

/// Lets the context override the backend's proposed presentation. Quiet
/// public spaces and loud ones drop audio; a visually busy user in an
/// ordinary setting gets audio added to a visual-only proposal.
pub fn resolve_presentation(
    suggested: PresentationModality,
    snapshot: &ContextSnapshot,
) -> PresentationModality {
    let mute = snapshot.quiet_public || snapshot.noise_level == NoiseLevel::Loud;
    if mute {
        if suggested.has_audio() {
            PresentationModality::VisualOnly
        } else {
            suggested
        }
    } else if snapshot.visually_engaged && suggested == PresentationModality::VisualOnly {
        PresentationModality::AudioVisual
    } else {
        suggested
    }
}

/// Resolves the presentation for `suggestion` and gates inputs for it.
pub fn plan_interaction(
    situation: &Situation,
    suggestion: &AgentSuggestion,
    cfg: &GatingConfig,
) -> InteractionPlan {
    let presentation = resolve_presentation(suggestion.modality, &situation.snapshot);
    gate_inputs_with(situation.siids, presentation, suggestion.query_type, cfg)
}

#[derive(Debug, Clone, Serialize)]
pub struct GatingRule {
    pub modality: InputModality,
    pub condition: &'static str,
    pub reason: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationRule {
    pub condition: &'static str,
    pub effect: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuggestionRule {
    pub rule: PolicyRule,
    pub outcome: &'static str,
}

/// Human-readable policy tables, as served to UIs that explain gating.
#[derive(Debug, Clone, Serialize)]
pub struct PolicyTable {
    pub suggestion_rules: Vec<SuggestionRule>,
    pub presentation_rules: Vec<PresentationRule>,
    pub gating_rules: Vec<GatingRule>,
}

pub fn policy_table() -> PolicyTable {
    PolicyTable {
        suggestion_rules: PolicyRule::PRIORITY
            .iter()
            .map(|&rule| SuggestionRule {
                rule,
                outcome: rule.describe(),
            })
            .collect(),
        presentation_rules: vec![
            PresentationRule {
                condition: "quiet public space or loud environment",
                effect: "audio dropped: presentation becomes visual-only",
            },
            PresentationRule {
                condition: "eyes occupied, ordinary setting, visual-only proposed",
                effect: "audio added: presentation becomes audio+visual",
            },
        ],
        gating_rules: vec![
            GatingRule {
                modality: InputModality::Voice,
                condition: "loud environment",
                reason: REASON_NOISY,
            },
            GatingRule {
                modality: InputModality::Voice,
                condition: "quiet public space or in conversation",
                reason: REASON_SPEECH,
            },
            GatingRule {
                modality: InputModality::HandGesture,
                condition: "hands occupied",
                reason: REASON_HANDS,
            },
            GatingRule {
                modality: InputModality::Gaze,
                condition: "audio-only presentation",
                reason: REASON_AUDIO_ONLY,
            },
            GatingRule {
                modality: InputModality::Gaze,
                condition: "eyes occupied",
                reason: REASON_EYES,
            },
            GatingRule {
                modality: InputModality::HeadGesture,
                condition: "head_disabled set in configuration",
                reason: REASON_CONFIG,
            },
            GatingRule {
                modality: InputModality::HeadGesture,
                condition: "every other modality suppressed",
                reason: REASON_FALLBACK,
            },
        ],
    }
}
