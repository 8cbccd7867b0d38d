//! Deterministic suggestion policy used by the rule-based backend.
//!
//! The first matching rule in priority order decides the query format and
//! the proposed presentation; the activity decides the action wording.

use serde::Serialize;

use crate::context::{ActivityType, ContextVariant, SiidFlags, Situation};

use super::types::{AgentSuggestion, PresentationModality, QueryType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyRule {
    TemporalUrgency,
    SociallyEngaged,
    Crowded,
    Unfamiliar,
    Familiar,
    CognitiveLoad,
    Default,
}

impl PolicyRule {
    /// Highest priority first.
    pub const PRIORITY: [PolicyRule; 7] = [
        PolicyRule::TemporalUrgency,
        PolicyRule::SociallyEngaged,
        PolicyRule::Crowded,
        PolicyRule::Unfamiliar,
        PolicyRule::Familiar,
        PolicyRule::CognitiveLoad,
        PolicyRule::Default,
    ];

    fn trigger(self) -> Option<ContextVariant> {
        Some(match self {
            PolicyRule::TemporalUrgency => ContextVariant::TemporalUrgency,
            PolicyRule::SociallyEngaged => ContextVariant::SociallyEngaged,
            PolicyRule::Crowded => ContextVariant::Crowded,
            PolicyRule::Unfamiliar => ContextVariant::UnfamiliarityBased,
            PolicyRule::Familiar => ContextVariant::FamiliarityBased,
            PolicyRule::CognitiveLoad => ContextVariant::CognitiveLoad,
            PolicyRule::Default => return None,
        })
    }

    pub fn describe(self) -> &'static str {
        match self {
            PolicyRule::TemporalUrgency => "binary; audio-only if eyes are busy, else audio+visual",
            PolicyRule::SociallyEngaged => "icon; visual-only",
            PolicyRule::Crowded => "icon (multi-choice if unfamiliar); visual-only",
            PolicyRule::Unfamiliar => "multi-choice; audio+visual",
            PolicyRule::Familiar => "icon; visual-only",
            PolicyRule::CognitiveLoad => {
                "binary; audio-only if hands and eyes are busy, else audio+visual"
            }
            PolicyRule::Default => "multi-choice; audio+visual",
        }
    }
}

pub fn select_rule(variants: &std::collections::BTreeSet<ContextVariant>) -> PolicyRule {
    PolicyRule::PRIORITY
        .into_iter()
        .find(|r| r.trigger().is_none_or(|v| variants.contains(&v)))
        .unwrap_or(PolicyRule::Default)
}

/// Query format and proposed presentation for a rule.
pub fn decide(
    rule: PolicyRule,
    variants: &std::collections::BTreeSet<ContextVariant>,
    siids: SiidFlags,
) -> (QueryType, PresentationModality) {
    use PresentationModality::*;
    match rule {
        PolicyRule::TemporalUrgency => (
            QueryType::Binary,
            if siids.vision_impaired {
                AudioOnly
            } else {
                AudioVisual
            },
        ),
        PolicyRule::SociallyEngaged => (QueryType::Icon, VisualOnly),
        PolicyRule::Crowded => {
            if variants.contains(&ContextVariant::UnfamiliarityBased) {
                (QueryType::MultiChoice, VisualOnly)
            } else {
                (QueryType::Icon, VisualOnly)
            }
        }
        PolicyRule::Unfamiliar => (QueryType::MultiChoice, AudioVisual),
        PolicyRule::Familiar => (QueryType::Icon, VisualOnly),
        PolicyRule::CognitiveLoad => (
            QueryType::Binary,
            if siids.hands_impaired && siids.vision_impaired {
                AudioOnly
            } else {
                AudioVisual
            },
        ),
        PolicyRule::Default => (QueryType::MultiChoice, AudioVisual),
    }
}

struct ActionSet {
    choice: &'static str,
    options: [&'static str; 3],
    binary: &'static str,
    icon: &'static str,
}

fn actions(activity: ActivityType) -> ActionSet {
    match activity {
        ActivityType::MenuReading => ActionSet {
            choice: "Provide dish recommendations",
            options: ["Top dishes", "Vegetarian options", "What I had last time"],
            binary: "Suggest fast options I can eat from the menu",
            icon: "Show a menu translation icon",
        },
        ActivityType::Cooking => ActionSet {
            choice: "Help with the recipe",
            options: [
                "Show the next step",
                "Start a timer",
                "List missing ingredients",
            ],
            binary: "Read the next recipe step aloud",
            icon: "Show a timer icon for the current step",
        },
        ActivityType::MuseumVisit => ActionSet {
            choice: "Explore this artwork",
            options: [
                "Artist biography",
                "Historical background",
                "Similar works nearby",
            ],
            binary: "Give a short audio summary of this artwork",
            icon: "Offer more information about the artwork (title, artist, background)",
        },
        ActivityType::Commuting => ActionSet {
            choice: "Help with the trip",
            options: [
                "Remind me before my stop",
                "Show the route map",
                "Play my podcast",
            ],
            binary: "Remind you two stops before your destination",
            icon: "Show a next-stop reminder icon",
        },
        ActivityType::Workout => ActionSet {
            choice: "Support this workout",
            options: [
                "Log this set",
                "Show the next exercise",
                "Play my workout playlist",
            ],
            binary: "Log today's workout",
            icon: "Show a set-counter icon",
        },
        ActivityType::GroceryShopping => ActionSet {
            choice: "Help with shopping",
            options: [
                "Show my grocery list",
                "Find deals in this aisle",
                "Locate the next item",
            ],
            binary: "Offer to recite the user's grocery list",
            icon: "Show a shopping-list icon",
        },
    }
}

fn reasoning(rule: PolicyRule, query: QueryType, modality: PresentationModality) -> String {
    let head = match rule {
        PolicyRule::TemporalUrgency => "The user is short on time, so a single yes/no confirmation is fastest.",
        PolicyRule::SociallyEngaged => {
            "The user is talking with someone; a silent peripheral icon avoids interrupting the conversation."
        }
        PolicyRule::Crowded => "The space is crowded, so discreet visual-only delivery fits best.",
        PolicyRule::Unfamiliar => {
            "The user is new to this setting and may want to explore alternatives with rich support."
        }
        PolicyRule::Familiar => "The user knows this setting well, so a low-stakes icon is enough.",
        PolicyRule::CognitiveLoad => {
            "The user's attention is partly occupied, so a quick yes/no confirmation keeps the load low."
        }
        PolicyRule::Default => "No particular constraint applies, so the user gets a rich three-way choice.",
    };
    let tail = match (query, modality) {
        (_, PresentationModality::AudioOnly) => " Their eyes are busy, so the prompt is spoken.",
        (QueryType::MultiChoice, PresentationModality::VisualOnly) => {
            " Offering alternatives helps in a new place."
        }
        (_, PresentationModality::AudioVisual) => {
            " Audio and visuals together make it easy to catch."
        }
        _ => "",
    };
    format!("{head}{tail}")
}

/// The rule-based suggestion for a situation.
pub fn rule_based_suggestion(situation: &Situation) -> AgentSuggestion {
    let rule = select_rule(&situation.variants);
    let (query_type, modality) = decide(rule, &situation.variants, situation.siids);
    let set = actions(situation.snapshot.activity);
    let (action_text, options) = match query_type {
        QueryType::MultiChoice => (
            set.choice.to_string(),
            set.options.iter().map(|o| o.to_string()).collect(),
        ),
        QueryType::Binary => (set.binary.to_string(), Vec::new()),
        QueryType::Icon => (set.icon.to_string(), Vec::new()),
    };
    AgentSuggestion {
        reasoning: reasoning(rule, query_type, modality),
        action_text,
        options,
        query_type,
        modality,
        warnings: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::context::{ContextSnapshot, CrowdDensity, Familiarity, Urgency};

    fn suggest(f: impl FnOnce(&mut ContextSnapshot)) -> AgentSuggestion {
        let mut s = ContextSnapshot::neutral(ActivityType::MenuReading);
        f(&mut s);
        rule_based_suggestion(&Situation::new(s))
    }

    #[test]
    fn unfamiliar_quiet_solo() {
        let s = suggest(|s| s.familiarity = Familiarity::Unfamiliar);
        assert_eq!(
            (s.query_type, s.modality),
            (QueryType::MultiChoice, PresentationModality::AudioVisual)
        );
        assert_eq!(s.options.len(), 3);
    }

    #[test]
    fn urgency_is_binary() {
        let s = suggest(|s| s.urgency = Urgency::Rushed);
        assert_eq!(s.query_type, QueryType::Binary);
    }

    #[test]
    fn social_is_visual_icon() {
        let s = suggest(|s| {
            s.crowd_density = CrowdDensity::Sparse;
            s.social_engagement = true;
        });
        assert_eq!(
            (s.query_type, s.modality),
            (QueryType::Icon, PresentationModality::VisualOnly)
        );
    }

    /// Every subset of the nine variants crossed with all 16 flag sets.
    #[test]
    fn total_over_variant_cross_product() {
        let all = ContextVariant::ALL;
        for mask in 0u32..(1 << all.len()) {
            let variants: BTreeSet<_> = all
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| *v)
                .collect();
            for siids in SiidFlags::all() {
                let rule = select_rule(&variants);
                let (q, m) = decide(rule, &variants, siids);
                assert!(!(q == QueryType::Icon && m == PresentationModality::AudioOnly));
                assert_eq!(decide(rule, &variants, siids), (q, m));
            }
        }
        for activity in ActivityType::ALL {
            for rule in PolicyRule::PRIORITY {
                let mut s = ContextSnapshot::neutral(*activity);
                match rule {
                    PolicyRule::Unfamiliar | PolicyRule::Default => {
                        if rule == PolicyRule::Unfamiliar {
                            s.familiarity = Familiarity::Unfamiliar;
                        }
                    }
                    _ => s.urgency = Urgency::Rushed,
                }
                rule_based_suggestion(&Situation::new(s)).check().unwrap();
            }
        }
    }
}
