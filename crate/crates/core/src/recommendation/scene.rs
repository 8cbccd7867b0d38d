//! Context parsing: scene description + user-specific overrides -> snapshot.

use serde_json::Value;

use crate::context::{
    ActivityType, ContextSnapshot, CrowdDensity, Familiarity, NoiseLevel, SnapshotOverrides,
    Strictness, Urgency,
};

use super::backend::Completion;
use super::RecommendError;

fn words(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric() && c != '\'')
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

/// True if `phrase` occurs as a run of whole words (prefix match on the
/// last word when it ends with `*`).
fn has(words: &[String], phrase: &str) -> bool {
    let parts: Vec<&str> = phrase.split_whitespace().collect();
    if parts.is_empty() || parts.len() > words.len() {
        return false;
    }
    words.windows(parts.len()).any(|w| {
        w.iter()
            .zip(&parts)
            .all(|(word, part)| match part.strip_suffix('*') {
                Some(prefix) => word.starts_with(prefix),
                None => word == part,
            })
    })
}

fn any(words: &[String], phrases: &[&str]) -> bool {
    phrases.iter().any(|p| has(words, p))
}

/// Keyword reading of a free-text scene. Only fields the text says
/// something about are filled in.
pub fn infer_from_description(description: &str) -> SnapshotOverrides {
    let w = words(description);
    let mut out = SnapshotOverrides::default();

    let activities: [(ActivityType, &[&str]); 6] = [
        (
            ActivityType::MuseumVisit,
            &[
                "museum*",
                "gallery",
                "galleries",
                "artwork*",
                "painting*",
                "exhibit*",
                "sculpture*",
            ],
        ),
        (
            ActivityType::GroceryShopping,
            &[
                "grocery",
                "groceries",
                "supermarket*",
                "aisle*",
                "shopping cart",
            ],
        ),
        (
            ActivityType::MenuReading,
            &["menu*", "restaurant*", "cafe*", "café*", "dish*", "diner"],
        ),
        (
            ActivityType::Cooking,
            &[
                "kitchen*", "cooking", "cook", "recipe*", "stove", "chopping", "baking",
            ],
        ),
        (
            ActivityType::Workout,
            &[
                "gym*",
                "workout*",
                "working out",
                "dumbbell*",
                "treadmill*",
                "exercis*",
                "lifting",
            ],
        ),
        (
            ActivityType::Commuting,
            &[
                "bus*", "train*", "subway", "commut*", "metro", "tram*", "platform",
            ],
        ),
    ];
    out.activity = activities
        .iter()
        .find(|(_, keys)| any(&w, keys))
        .map(|(a, _)| *a);

    out.familiarity = if any(
        &w,
        &[
            "unfamiliar",
            "new",
            "first time",
            "first-time",
            "never been",
        ],
    ) {
        Some(Familiarity::Unfamiliar)
    } else if any(
        &w,
        &[
            "familiar",
            "usual",
            "regular",
            "often",
            "favorite",
            "favourite",
        ],
    ) {
        Some(Familiarity::Familiar)
    } else {
        None
    };

    if any(
        &w,
        &[
            "rush",
            "rushing",
            "rushed",
            "hurry*",
            "quickly",
            "late",
            "short on time",
        ],
    ) {
        out.urgency = Some(Urgency::Rushed);
    }

    out.noise_level = if any(
        &w,
        &[
            "slightly noisy",
            "somewhat noisy",
            "a bit noisy",
            "moderately noisy",
        ],
    ) {
        Some(NoiseLevel::Moderate)
    } else if any(&w, &["noisy", "loud", "very noisy", "blaring"]) {
        Some(NoiseLevel::Loud)
    } else if any(&w, &["quiet", "silent", "calm"]) {
        Some(NoiseLevel::Quiet)
    } else {
        None
    };

    out.crowd_density = if any(
        &w,
        &[
            "not crowded",
            "alone",
            "empty",
            "by themselves",
            "by herself",
            "by himself",
        ],
    ) {
        Some(CrowdDensity::Alone)
    } else if any(&w, &["crowded", "crowd", "packed", "patrons"]) {
        Some(CrowdDensity::Crowded)
    } else if any(
        &w,
        &["few people", "some people", "others around", "with others"],
    ) {
        Some(CrowdDensity::Sparse)
    } else {
        None
    };

    if any(
        &w,
        &[
            "talking",
            "chatting",
            "conversation",
            "conversing",
            "with a friend",
            "with friends",
            "with his friend",
            "with her friend",
        ],
    ) {
        out.social_engagement = Some(true);
    }
    if any(
        &w,
        &[
            "holding",
            "carrying",
            "hands full",
            "hands occupied",
            "hands are busy",
            "dumbbell*",
            "chopping",
            "kneading",
        ],
    ) {
        out.hands_occupied = Some(true);
    }
    if any(
        &w,
        &[
            "studying",
            "looking at",
            "engaged with",
            "focused on",
            "watching",
            "examining",
            "reading",
        ],
    ) {
        out.visually_engaged = Some(true);
    }
    if any(
        &w,
        &[
            "library",
            "lecture",
            "theater",
            "theatre",
            "meeting",
            "quiet museum",
            "quiet gallery",
        ],
    ) {
        out.quiet_public = Some(true);
    }
    out
}

/// Fills every field still missing with the neutral value and checks the
/// snapshot invariants. Someone to talk to implies not being alone.
pub(crate) fn finish(
    mut merged: SnapshotOverrides,
    description: &str,
) -> Result<ContextSnapshot, RecommendError> {
    let activity = merged.activity.ok_or(RecommendError::InsufficientContext)?;
    let mut snap = ContextSnapshot::neutral(activity);
    if merged.social_engagement == Some(true) && merged.crowd_density.is_none() {
        merged.crowd_density = Some(CrowdDensity::Sparse);
    }
    merged.apply_to(&mut snap);
    if snap.scene_description.is_none() && !description.trim().is_empty() {
        snap.scene_description = Some(description.trim().to_string());
    }
    snap.validate().map_err(|e| RecommendError::ContextParse {
        reason: e.to_string(),
        raw: String::new(),
    })?;
    Ok(snap)
}

/// Rule-based context parsing: keywords first, overrides win.
pub fn parse_context_rules(
    description: &str,
    overrides: &SnapshotOverrides,
) -> Result<ContextSnapshot, RecommendError> {
    if description.trim().is_empty() {
        if let Some(snapshot) = overrides.complete() {
            return Ok(snapshot);
        }
        if overrides.activity.is_none() {
            return Err(RecommendError::InsufficientContext);
        }
        return finish(overrides.clone(), description);
    }
    let mut merged = infer_from_description(description);
    overrides.apply_onto_overrides(&mut merged);
    finish(merged, description)
}

pub const CONTEXT_PARSE_PREAMBLE: &str = "\
You extract structured context for a proactive augmented-reality assistant. Think step by step \
about the scene: the activity, the kind of place, whether the user's hands or eyes are busy, \
whether they are talking with someone, how noisy and crowded it is, and whether speaking aloud \
would be inappropriate. Then output one JSON object with exactly these keys:
activity (menu_reading | cooking | museum_visit | commuting | workout | grocery_shopping),
location (short text),
familiarity (familiar | unfamiliar | neutral),
urgency (none | rushed),
noise_level (quiet | moderate | loud),
crowd_density (alone | sparse | crowded),
social_engagement, hands_occupied, visually_engaged, quiet_public (true | false).";

pub fn context_prompt(description: &str, overrides: &SnapshotOverrides) -> String {
    let known = serde_json::to_value(overrides)
        .ok()
        .and_then(|v| {
            v.as_object().map(|m| {
                m.iter()
                    .filter(|(_, v)| !v.is_null())
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect::<serde_json::Map<_, _>>()
            })
        })
        .unwrap_or_default();
    format!(
        "{CONTEXT_PARSE_PREAMBLE}\n\nKnown user-specific facts (authoritative): {}\n\nScene: {}\n\nReasoning:",
        Value::Object(known),
        description.trim()
    )
}

/// Model-backed context parsing. The reply's last JSON object is read; the
/// caller's overrides are applied on top of whatever the model inferred.
pub fn parse_context_model(
    description: &str,
    overrides: &SnapshotOverrides,
    model: &dyn Completion,
) -> Result<ContextSnapshot, RecommendError> {
    let reply = model.complete(&context_prompt(description, overrides))?;
    let bad = |reason: String| RecommendError::ContextParse {
        reason,
        raw: reply.clone(),
    };
    let (start, end) = match (reply.find('{'), reply.rfind('}')) {
        (Some(s), Some(e)) if s < e => (s, e),
        _ => return Err(bad("reply contains no JSON object".into())),
    };
    let mut value: Value =
        serde_json::from_str(&reply[start..=end]).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    if let Some(obj) = value.as_object_mut() {
        obj.retain(|k, _| {
            [
                "activity",
                "location",
                "familiarity",
                "urgency",
                "noise_level",
                "crowd_density",
                "social_engagement",
                "hands_occupied",
                "visually_engaged",
                "quiet_public",
            ]
            .contains(&k.as_str())
        });
    }
    let mut inferred: SnapshotOverrides =
        serde_json::from_value(value).map_err(|e| bad(format!("invalid field: {e}")))?;
    overrides.apply_onto_overrides(&mut inferred);
    let mut snap = inferred
        .complete()
        .or_else(|| {
            let mut s = ContextSnapshot::neutral(inferred.activity?);
            inferred.apply_to(&mut s);
            Some(s)
        })
        .ok_or_else(|| bad("reply did not name an activity".into()))?;
    if snap.location.trim().is_empty() {
        snap.location = snap.activity.default_location().into();
    }
    if snap.scene_description.is_none() && !description.trim().is_empty() {
        snap.scene_description = Some(description.trim().to_string());
    }
    let text = serde_json::to_string(&snap).expect("snapshot serializes");
    ContextSnapshot::from_json_str(&text, Strictness::Strict).map_err(|e| bad(e.to_string()))
}

impl SnapshotOverrides {
    /// Copies every present field of `self` onto `target`.
    pub(crate) fn apply_onto_overrides(&self, target: &mut SnapshotOverrides) {
        macro_rules! put {
            ($($f:ident),*) => { $( if self.$f.is_some() { target.$f = self.$f.clone(); } )* };
        }
        put!(
            activity,
            location,
            familiarity,
            urgency,
            noise_level,
            crowd_density,
            social_engagement,
            hands_occupied,
            visually_engaged,
            quiet_public,
            scene_description
        );
    }
}
