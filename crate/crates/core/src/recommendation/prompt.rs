//! Few-shot chain-of-thought prompt assembly.

use std::fmt::Write as _;

use serde::Serialize;

use crate::context::{
    ActivityType, ContextSnapshot, CrowdDensity, Familiarity, NoiseLevel, Situation, Urgency,
};
use crate::vocab::join;

use super::types::Exemplar;

pub const PREAMBLE: &str = "\
You are a proactive assistant running on augmented-reality glasses. Without being asked, \
you propose one helpful action for the user's current situation and decide how it is offered.

Valid output space:
- Query format: binary (a yes/no confirmation of a single action), multi-choice (three \
alternative actions to pick from), or icon (one low-stakes action shown as a small peripheral icon).
- Presentation modality: audio, visual, or audio+visual.

Prefer the lowest-effort format that still lets the user decide, and never rely on an output \
channel the situation makes unusable. Worked examples follow.";

pub const INSTRUCTION: &str = "\
Based on the context provided above, generate:
(1) a reasoning for your decision,
(2) the recommended agent action,
(3) a query format (binary/multi-choice/icon), and
(4) a presentation modality (audio/visual/audio+visual).
Structure the output as shown in the examples; if the query format is 'multi-choice', provide three distinct options for the agent action.";

/// The four parts of a suggestion prompt, kept apart for auditing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PromptBundle {
    pub preamble: String,
    pub exemplar_blocks: Vec<String>,
    pub context_block: String,
    pub instruction: String,
}

impl PromptBundle {
    pub fn render(&self) -> String {
        let mut parts = Vec::with_capacity(self.exemplar_blocks.len() + 3);
        parts.push(self.preamble.as_str());
        parts.extend(self.exemplar_blocks.iter().map(String::as_str));
        parts.push(&self.context_block);
        parts.push(&self.instruction);
        parts.join("\n\n")
    }
}

pub fn render_exemplar(position: usize, ex: &Exemplar) -> String {
    format!(
        "Example {position}\nContext: {}\nReasoning: {}\nAgentSuggestion: {} | {} | {}",
        ex.context_text.trim(),
        ex.reasoning.trim(),
        ex.action_text.trim(),
        ex.query_type.label(),
        ex.modality.label()
    )
}

fn activity_phrase(activity: ActivityType) -> &'static str {
    match activity {
        ActivityType::MenuReading => "reading a menu",
        ActivityType::Cooking => "cooking",
        ActivityType::MuseumVisit => "visiting a museum",
        ActivityType::Commuting => "commuting",
        ActivityType::Workout => "working out",
        ActivityType::GroceryShopping => "grocery shopping",
    }
}

/// Natural-language rendering of a snapshot, one situational factor per sentence.
pub fn describe_snapshot(s: &ContextSnapshot) -> String {
    let mut out = format!(
        "User is {} ({}).",
        activity_phrase(s.activity),
        s.location.trim()
    );
    out.push_str(match s.familiarity {
        Familiarity::Familiar => " The place and task are familiar to them.",
        Familiarity::Unfamiliar => " They are new to this place or task.",
        Familiarity::Neutral => "",
    });
    if s.urgency == Urgency::Rushed {
        out.push_str(" They are in a rush.");
    }
    out.push_str(match s.noise_level {
        NoiseLevel::Quiet => " The environment is quiet.",
        NoiseLevel::Moderate => " The environment is moderately noisy.",
        NoiseLevel::Loud => " The environment is very noisy.",
    });
    out.push_str(match s.crowd_density {
        CrowdDensity::Alone => " They are alone.",
        CrowdDensity::Sparse => " A few other people are around.",
        CrowdDensity::Crowded => " The space is crowded.",
    });
    if s.social_engagement {
        out.push_str(" They are in conversation with someone.");
    }
    if s.hands_occupied {
        out.push_str(" Their hands are occupied.");
    }
    if s.visually_engaged {
        out.push_str(" Their eyes are committed to a physical task.");
    }
    if s.quiet_public {
        out.push_str(" Speaking aloud would be socially inappropriate here.");
    }
    out
}

pub fn render_situation(situation: &Situation) -> String {
    let mut block = String::from("Current situation:\n");
    block.push_str(&describe_snapshot(&situation.snapshot));
    let _ = write!(block, "\nContext variants: {}", join(&situation.variants));
    if let Some(scene) = situation.snapshot.scene_description.as_deref() {
        if !scene.trim().is_empty() {
            let _ = write!(block, "\nScene: {}", scene.trim());
        }
    }
    block
}

/// Builds the full prompt: preamble, exemplar blocks in selection order,
/// the current situation, then the fixed task instruction.
pub fn assemble_prompt<'a>(
    situation: &Situation,
    exemplars: impl IntoIterator<Item = &'a Exemplar>,
) -> PromptBundle {
    PromptBundle {
        preamble: PREAMBLE.to_string(),
        exemplar_blocks: exemplars
            .into_iter()
            .enumerate()
            .map(|(i, ex)| render_exemplar(i + 1, ex))
            .collect(),
        context_block: render_situation(situation),
        instruction: INSTRUCTION.to_string(),
    }
}
