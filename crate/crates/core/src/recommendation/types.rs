use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::context::{ActivityType, ContextVariant};
use crate::vocab::vocab;

vocab! {
    /// Format of a proactive prompt, from most to least effort for the user.
    pub enum QueryType: "query type" {
        MultiChoice = "multi_choice" | "multiple_choice" | "multichoice_selection" | "multi",
        Binary = "binary" | "yes_no" | "binary_confirmation",
        Icon = "icon" | "icon_based" | "icon_cue",
    }
}

vocab! {
    /// Output channel(s) used to present a prompt.
    pub enum PresentationModality: "presentation modality" {
        VisualOnly = "visual_only" | "visual",
        AudioOnly = "audio_only" | "audio" | "auditory" | "auditory_only",
        AudioVisual = "audio_visual" | "audio+visual" | "both" | "audiovisual",
    }
}

impl QueryType {
    /// Label used inside prompts and exemplar blocks.
    pub fn label(self) -> &'static str {
        match self {
            QueryType::MultiChoice => "Multi-choice",
            QueryType::Binary => "Binary",
            QueryType::Icon => "Icon",
        }
    }
}

impl PresentationModality {
    pub fn label(self) -> &'static str {
        match self {
            PresentationModality::VisualOnly => "Visual",
            PresentationModality::AudioOnly => "Audio",
            PresentationModality::AudioVisual => "Audio+Visual",
        }
    }

    pub fn has_audio(self) -> bool {
        self != PresentationModality::VisualOnly
    }

    pub fn has_visual(self) -> bool {
        self != PresentationModality::AudioOnly
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExemplarTags {
    pub activity: ActivityType,
    pub variants: BTreeSet<ContextVariant>,
}

/// A (context, reasoning, suggestion) triplet used for few-shot conditioning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exemplar {
    pub context_text: String,
    pub reasoning: String,
    pub action_text: String,
    pub query_type: QueryType,
    pub modality: PresentationModality,
    pub tags: ExemplarTags,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExemplarError {
    #[error("exemplar {index}: {reason}")]
    Invalid { index: usize, reason: String },
    #[error("exemplar pool: {0}")]
    Json(String),
}

impl Exemplar {
    pub fn validate(&self) -> Result<(), String> {
        for (name, text) in [
            ("context_text", &self.context_text),
            ("reasoning", &self.reasoning),
            ("action_text", &self.action_text),
        ] {
            if text.trim().is_empty() {
                return Err(format!("{name} is empty"));
            }
        }
        if self.tags.variants.is_empty() {
            return Err("tags.variants is empty".into());
        }
        if self.query_type == QueryType::MultiChoice {
            let opts = super::parse::extract_options(&self.action_text);
            if !options_are_valid(&opts) {
                return Err(format!(
                    "multi-choice action must encode three distinct options, found {opts:?}"
                ));
            }
        }
        Ok(())
    }
}

/// Parses and validates an exemplar pool (a JSON array of exemplars).
pub fn load_pool(json: &str) -> Result<Vec<Exemplar>, ExemplarError> {
    let pool: Vec<Exemplar> =
        serde_json::from_str(json).map_err(|e| ExemplarError::Json(e.to_string()))?;
    for (index, ex) in pool.iter().enumerate() {
        ex.validate()
            .map_err(|reason| ExemplarError::Invalid { index, reason })?;
    }
    Ok(pool)
}

/// The authored pool shipped with the crate.
pub fn default_pool() -> Vec<Exemplar> {
    load_pool(include_str!("../../data/exemplars.json")).expect("bundled exemplar pool is valid")
}

/// The "what" output: a proactive suggestion and how it should be shown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentSuggestion {
    pub reasoning: String,
    pub action_text: String,
    #[serde(default)]
    pub options: Vec<String>,
    pub query_type: QueryType,
    pub modality: PresentationModality,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub(crate) fn options_are_valid(options: &[String]) -> bool {
    options.len() == 3
        && options.iter().all(|o| !o.trim().is_empty())
        && options[0] != options[1]
        && options[0] != options[2]
        && options[1] != options[2]
}

impl AgentSuggestion {
    /// Checks the structural invariants every outgoing suggestion must hold.
    pub fn check(&self) -> Result<(), String> {
        if self.action_text.trim().is_empty() {
            return Err("empty action".into());
        }
        match self.query_type {
            QueryType::MultiChoice if !options_are_valid(&self.options) => Err(format!(
                "multi-choice needs exactly three distinct options, got {}",
                self.options.len()
            )),
            QueryType::Binary | QueryType::Icon if !self.options.is_empty() => {
                Err(format!("{} query must not carry options", self.query_type))
            }
            QueryType::Icon if self.modality == PresentationModality::AudioOnly => {
                Err("icon cannot be presented audio-only".into())
            }
            _ => Ok(()),
        }
    }

    /// Applies the icon/audio-only coercion, then checks invariants.
    pub(crate) fn normalize(mut self) -> Result<Self, String> {
        if self.query_type == QueryType::Icon && self.modality == PresentationModality::AudioOnly {
            self.modality = PresentationModality::VisualOnly;
            self.warnings.push(
                "icon suggestion reported audio-only presentation; coerced to visual-only".into(),
            );
        }
        if self.query_type != QueryType::MultiChoice {
            self.options.clear();
        }
        self.check()?;
        Ok(self)
    }
}
