//! Context-aware decision pipeline for proactive AR agents.
//!
//! Given a snapshot of what the user is doing, the engine decides *what*
//! help to offer ([`recommendation`]), *how* to present it and which input
//! channels stay usable ([`adaptation`]), and turns sensor traces into the
//! user's answer ([`gestures`]). [`dataset`] reproduces the annotation-study
//! statistics and [`simulator`] replays scripted scenarios end to end.
//!
//! ```
//! use proactive_core::prelude::*;
//!
//! let mut snapshot = ContextSnapshot::neutral(ActivityType::GroceryShopping);
//! snapshot.familiarity = Familiarity::Familiar;
//! snapshot.urgency = Urgency::Rushed;
//! snapshot.visually_engaged = true;
//!
//! let situation = Situation::new(snapshot);
//! let suggestion = Recommender::rule_based().suggest(&situation).unwrap();
//! let plan = plan_interaction(&situation, &suggestion, &GatingConfig::default());
//!
//! assert_eq!(suggestion.query_type, QueryType::Binary);
//! assert_eq!(plan.presentation, PresentationModality::AudioOnly);
//! assert!(!plan.is_enabled(InputModality::Gaze));
//! ```

pub mod adaptation;
pub mod context;
pub mod dataset;
pub mod gestures;
pub mod recommendation;
pub mod simulator;
mod vocab;

pub use vocab::UnknownTerm;

/// The types most callers need.
pub mod prelude {
    pub use crate::adaptation::{
        gate_inputs, plan_interaction, resolve_presentation, GatingConfig, InputModality,
        InteractionPlan,
    };
    pub use crate::context::{
        ActivityType, ContextSnapshot, ContextVariant, CrowdDensity, Familiarity, NoiseLevel,
        SiidFlags, Situation, Strictness, Urgency,
    };
    pub use crate::gestures::{RecognizedInput, RecognizerConfig, ResponseValue};
    pub use crate::recommendation::{
        AgentSuggestion, Backend, PresentationModality, QueryType, Recommender,
    };
}
