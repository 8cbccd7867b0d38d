//! Configuration and the shared engine behind both the CLI and the service.

use std::path::Path;

use serde::{Deserialize, Serialize};

use proactive_core::adaptation::{plan_interaction, GatingConfig, InteractionPlan};
use proactive_core::context::{
    ContextSnapshot, ContextVariant, Situation, SnapshotOverrides, Strictness,
};
use proactive_core::gestures::RecognizerConfig;
use proactive_core::recommendation::{
    default_pool, load_pool, AgentSuggestion, Backend, BackendConfig, BackendKind, RecommendError,
    Recommender,
};
use proactive_core::simulator::{Scenario, SimConfig};

/// Contents of a `--config` file. Every section is optional.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppConfig {
    pub backend: BackendConfig,
    pub recognizer: RecognizerConfig,
    pub gating: GatingConfig,
    /// Exemplar pool file; the bundled pool when absent.
    pub exemplars: Option<std::path::PathBuf>,
}

impl AppConfig {
    pub fn load(path: &Path) -> Result<Self, EngineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EngineError::Invalid(format!("{}: {e}", path.display())))?;
        let cfg: AppConfig = serde_json::from_str(&text)
            .map_err(|e| EngineError::Invalid(format!("{}: {e}", path.display())))?;
        cfg.recognizer
            .validate()
            .map_err(|e| EngineError::Invalid(e.to_string()))?;
        Ok(cfg)
    }

    /// Forces the backend kind chosen on the command line.
    pub fn with_backend_kind(mut self, kind: Option<BackendKind>) -> Self {
        if let Some(kind) = kind {
            self.backend.kind = kind;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    /// Bad input, configuration or request.
    #[error("{0}")]
    Invalid(String),
    /// The model backend failed or replied with something unusable.
    #[error("{0}")]
    Backend(String),
}

impl From<RecommendError> for EngineError {
    fn from(e: RecommendError) -> Self {
        match e {
            RecommendError::Backend(_)
            | RecommendError::MalformedSuggestion { .. }
            | RecommendError::ContextParse { .. } => EngineError::Backend(e.to_string()),
            RecommendError::InsufficientContext
            | RecommendError::EmptyAction
            | RecommendError::EmptyPool => EngineError::Invalid(e.to_string()),
        }
    }
}

/// Everything a request needs: the recommender, recognizer and gating
/// settings, and the loaded scenario suite.
#[derive(Debug, Clone)]
pub struct Engine {
    pub recommender: Recommender,
    pub sim: SimConfig,
    pub scenarios: Vec<Scenario>,
}

impl Engine {
    pub fn from_config(cfg: &AppConfig) -> Result<Self, EngineError> {
        let backend =
            Backend::from_config(&cfg.backend).map_err(|e| EngineError::Invalid(e.to_string()))?;
        let pool = match &cfg.exemplars {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| EngineError::Invalid(format!("{}: {e}", path.display())))?;
                load_pool(&text)
                    .map_err(|e| EngineError::Invalid(format!("{}: {e}", path.display())))?
            }
            None => default_pool(),
        };
        Ok(Engine {
            recommender: Recommender::new(pool, backend),
            sim: SimConfig {
                recognizer: cfg.recognizer.clone(),
                gating: cfg.gating,
            },
            scenarios: Vec::new(),
        })
    }

    pub fn rule_based() -> Self {
        Engine {
            recommender: Recommender::rule_based(),
            sim: SimConfig::default(),
            scenarios: Vec::new(),
        }
    }

    pub fn with_scenarios(mut self, scenarios: Vec<Scenario>) -> Self {
        self.scenarios = scenarios;
        self
    }

    pub fn scenario(&self, id: &str) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| s.script.id == id)
    }

    /// Builds a situation from either a snapshot JSON value or a scene
    /// description with optional overrides.
    pub fn situation(&self, input: &ContextInput) -> Result<Situation, EngineError> {
        let snapshot = match (&input.snapshot, &input.scene) {
            (Some(value), None) => {
                ContextSnapshot::from_json_value(value.clone(), input.strictness())
                    .map_err(|e| EngineError::Invalid(e.to_string()))?
            }
            (None, Some(scene)) => self.recommender.parse_context(scene, &input.overrides)?,
            (Some(_), Some(_)) => {
                return Err(EngineError::Invalid(
                    "give either a snapshot or a scene, not both".into(),
                ))
            }
            (None, None) => {
                return Err(EngineError::Invalid(
                    "a snapshot or a scene is required".into(),
                ))
            }
        };
        Ok(Situation::with_extra_variants(
            snapshot,
            input.extra_variants.iter().copied(),
        ))
    }

    pub fn suggest(
        &self,
        situation: &Situation,
    ) -> Result<(AgentSuggestion, InteractionPlan), EngineError> {
        let suggestion = self.recommender.suggest(situation)?;
        let plan = plan_interaction(situation, &suggestion, &self.sim.gating);
        Ok((suggestion, plan))
    }
}

/// Where a suggestion's context comes from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContextInput {
    pub snapshot: Option<serde_json::Value>,
    pub scene: Option<String>,
    pub overrides: SnapshotOverrides,
    pub extra_variants: Vec<ContextVariant>,
    /// Ignore unknown snapshot keys instead of rejecting them.
    pub lenient: bool,
}

impl ContextInput {
    pub fn strictness(&self) -> Strictness {
        if self.lenient {
            Strictness::Lenient
        } else {
            Strictness::Strict
        }
    }
}
