//! The "what" pipeline: context parsing, few-shot exemplar selection,
//! prompt assembly, suggestion generation and the follow-up response.

pub mod backend;
pub mod parse;
pub mod policy;
pub mod prompt;
pub mod remote;
pub mod scene;
pub mod selection;
pub mod types;

use crate::context::{ContextSnapshot, Situation, SnapshotOverrides};

pub use backend::{
    Backend, BackendConfig, BackendError, BackendKind, CannedCompletion, Completion,
};
pub use parse::parse_suggestion;
pub use prompt::{assemble_prompt, PromptBundle};
pub use selection::{select_exemplars, Selection, DEFAULT_SHOTS};
pub use types::{
    default_pool, load_pool, AgentSuggestion, Exemplar, ExemplarTags, PresentationModality,
    QueryType,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecommendError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("malformed suggestion ({reason})")]
    MalformedSuggestion { reason: String, raw: String },
    #[error("could not parse context ({reason})")]
    ContextParse { reason: String, raw: String },
    #[error("not enough context: give a scene description or a complete snapshot")]
    InsufficientContext,
    #[error("selected action must not be empty")]
    EmptyAction,
    #[error("exemplar pool is empty")]
    EmptyPool,
}

/// Bundles an exemplar pool with a backend.
#[derive(Debug, Clone)]
pub struct Recommender {
    pool: Vec<Exemplar>,
    backend: Backend,
    shots: usize,
}

impl Recommender {
    pub fn new(pool: Vec<Exemplar>, backend: Backend) -> Self {
        Recommender {
            pool,
            backend,
            shots: DEFAULT_SHOTS,
        }
    }

    /// Rule-based backend over the bundled pool.
    pub fn rule_based() -> Self {
        Self::new(default_pool(), Backend::RuleBased)
    }

    pub fn with_shots(mut self, shots: usize) -> Self {
        self.shots = shots.max(1);
        self
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn pool(&self) -> &[Exemplar] {
        &self.pool
    }

    /// The prompt a model backend would receive for `situation`.
    pub fn prompt(&self, situation: &Situation) -> Result<(PromptBundle, bool), RecommendError> {
        if self.pool.is_empty() {
            return Err(RecommendError::EmptyPool);
        }
        let selection = select_exemplars(situation, &self.pool, self.shots);
        Ok((
            assemble_prompt(situation, selection.exemplars.iter().copied()),
            selection.short_pool,
        ))
    }

    pub fn parse_context(
        &self,
        scene_description: &str,
        overrides: &SnapshotOverrides,
    ) -> Result<ContextSnapshot, RecommendError> {
        parse_context(scene_description, overrides, &self.backend)
    }

    pub fn suggest(&self, situation: &Situation) -> Result<AgentSuggestion, RecommendError> {
        generate_suggestion(situation, &self.pool, &self.backend, self.shots)
    }

    pub fn respond(
        &self,
        situation: &Situation,
        selected_action: &str,
    ) -> Result<String, RecommendError> {
        generate_response(situation, selected_action, &self.backend)
    }
}

/// Turns a scene description plus user-specific overrides into a complete
/// snapshot. Override fields always win.
pub fn parse_context(
    scene_description: &str,
    overrides: &SnapshotOverrides,
    backend: &Backend,
) -> Result<ContextSnapshot, RecommendError> {
    match backend {
        Backend::Model(model) if !scene_description.trim().is_empty() => {
            scene::parse_context_model(scene_description, overrides, model.as_ref())
        }
        _ => scene::parse_context_rules(scene_description, overrides),
    }
}

/// Produces the proactive suggestion for a situation. Model backends get the
/// assembled few-shot prompt and their reply is parsed; the rule-based
/// backend applies the policy table.
pub fn generate_suggestion(
    situation: &Situation,
    pool: &[Exemplar],
    backend: &Backend,
    shots: usize,
) -> Result<AgentSuggestion, RecommendError> {
    match backend {
        Backend::RuleBased => Ok(policy::rule_based_suggestion(situation)),
        Backend::Model(model) => {
            if pool.is_empty() {
                return Err(RecommendError::EmptyPool);
            }
            let selection = select_exemplars(situation, pool, shots);
            let prompt = assemble_prompt(situation, selection.exemplars.iter().copied()).render();
            let reply = model.complete(&prompt)?;
            parse_suggestion(&reply)
        }
    }
}

pub const RESPONSE_PREAMBLE: &str = "\
You are a proactive augmented-reality assistant. The user just accepted the action below in the \
situation described. Reply with the one or two short sentences you say next, grounded in their choice.";

pub fn response_prompt(situation: &Situation, selected_action: &str) -> String {
    format!(
        "{RESPONSE_PREAMBLE}\n\n{}\n\nSelected action: {}\n\nReply:",
        prompt::render_situation(situation),
        selected_action.trim()
    )
}

/// The agent's follow-up utterance once the user has chosen.
pub fn generate_response(
    situation: &Situation,
    selected_action: &str,
    backend: &Backend,
) -> Result<String, RecommendError> {
    let action = selected_action.trim();
    if action.is_empty() {
        return Err(RecommendError::EmptyAction);
    }
    match backend {
        Backend::RuleBased => Ok(format!(
            "Got it: {}. I'll take care of it while you keep {}.",
            action.trim_end_matches('.'),
            activity_gerund(situation)
        )),
        Backend::Model(model) => Ok(model.complete(&response_prompt(situation, action))?),
    }
}

fn activity_gerund(situation: &Situation) -> &'static str {
    use crate::context::ActivityType::*;
    match situation.snapshot.activity {
        MenuReading => "looking over the menu",
        Cooking => "cooking",
        MuseumVisit => "enjoying the exhibit",
        Commuting => "riding",
        Workout => "training",
        GroceryShopping => "shopping",
    }
}
