//! Situational context: activities, context variants, impairment flags and
//! the structured snapshot that both the suggestion and the interaction
//! pipelines consume.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::vocab::vocab;

vocab! {
    /// High-level everyday activity the user is engaged in.
    pub enum ActivityType: "activity" {
        MenuReading = "menu_reading" | "restaurant" | "menu",
        Cooking = "cooking",
        MuseumVisit = "museum_visit" | "museum",
        Commuting = "commuting" | "commute",
        Workout = "workout" | "gym",
        GroceryShopping = "grocery_shopping" | "grocery",
    }
}

vocab! {
    /// Categorical modulation of an activity.
    pub enum ContextVariant: "context variant" {
        Default = "default",
        TemporalUrgency = "temporal_urgency" | "urgency",
        FamiliarityBased = "familiarity_based" | "familiar",
        UnfamiliarityBased = "unfamiliarity_based" | "unfamiliar",
        CognitiveLoad = "cognitive_load",
        Crowded = "crowded",
        SociallyEngaged = "socially_engaged",
        DivergentSetting = "divergent_setting" | "diff",
        EnvironmentalChanges = "environmental_changes" | "env",
    }
}

vocab! {
    /// Kind of proactive help a user asked for.
    pub enum ActionCategory: "action category" {
        Suggest = "suggest",
        Remind = "remind",
        Guide = "guide",
        Summarize = "summarize",
        Automate = "automate",
        VisualAugmentation = "visual_augmentation",
        InformationRetrieval = "information_retrieval",
        TakeAppAction = "take_app_action",
    }
}

vocab! {
    pub enum Familiarity: "familiarity" {
        Familiar = "familiar",
        Unfamiliar = "unfamiliar",
        Neutral = "neutral",
    }
}

vocab! {
    pub enum Urgency: "urgency" {
        None = "none",
        Rushed = "rushed",
    }
}

vocab! {
    pub enum NoiseLevel: "noise level" {
        Quiet = "quiet",
        Moderate = "moderate",
        Loud = "loud",
    }
}

vocab! {
    pub enum CrowdDensity: "crowd density" {
        Alone = "alone",
        Sparse = "sparse",
        Crowded = "crowded",
    }
}

impl ActivityType {
    /// Location used when a scene description names the activity but not a place.
    pub fn default_location(self) -> &'static str {
        match self {
            ActivityType::MenuReading => "restaurant",
            ActivityType::Cooking => "kitchen",
            ActivityType::MuseumVisit => "museum gallery",
            ActivityType::Commuting => "bus",
            ActivityType::Workout => "gym",
            ActivityType::GroceryShopping => "grocery store",
        }
    }
}

/// Structured situational state at the moment the agent considers acting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextSnapshot {
    pub activity: ActivityType,
    pub location: String,
    pub familiarity: Familiarity,
    pub urgency: Urgency,
    pub noise_level: NoiseLevel,
    pub crowd_density: CrowdDensity,
    /// Actively conversing with a co-present person.
    pub social_engagement: bool,
    pub hands_occupied: bool,
    /// Eyes committed to a physical task.
    pub visually_engaged: bool,
    /// Speech is socially inappropriate here (library, quiet gallery).
    pub quiet_public: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scene_description: Option<String>,
}

/// How unknown keys in snapshot JSON are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("malformed snapshot JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("snapshot must be a JSON object")]
    NotAnObject,
    #[error("unknown snapshot field(s): {0}")]
    UnknownFields(String),
    #[error("invalid snapshot: {0}")]
    Invalid(&'static str),
}

const SNAPSHOT_FIELDS: &[&str] = &[
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
    "scene_description",
];

impl ContextSnapshot {
    /// A snapshot with no trigger set: neutral familiarity, no rush, quiet,
    /// alone, nothing occupied.
    pub fn neutral(activity: ActivityType) -> Self {
        ContextSnapshot {
            activity,
            location: activity.default_location().to_string(),
            familiarity: Familiarity::Neutral,
            urgency: Urgency::None,
            noise_level: NoiseLevel::Quiet,
            crowd_density: CrowdDensity::Alone,
            social_engagement: false,
            hands_occupied: false,
            visually_engaged: false,
            quiet_public: false,
            scene_description: None,
        }
    }

    pub fn validate(&self) -> Result<(), SnapshotError> {
        if self.crowd_density == CrowdDensity::Alone && self.social_engagement {
            return Err(SnapshotError::Invalid(
                "social_engagement requires someone present (crowd_density != alone)",
            ));
        }
        Ok(())
    }

    pub fn from_json_str(text: &str, strictness: Strictness) -> Result<Self, SnapshotError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        Self::from_json_value(value, strictness)
    }

    pub fn from_json_value(
        value: serde_json::Value,
        strictness: Strictness,
    ) -> Result<Self, SnapshotError> {
        let obj = value.as_object().ok_or(SnapshotError::NotAnObject)?;
        if strictness == Strictness::Strict {
            let unknown: Vec<&str> = obj
                .keys()
                .map(String::as_str)
                .filter(|k| !SNAPSHOT_FIELDS.contains(k))
                .collect();
            if !unknown.is_empty() {
                return Err(SnapshotError::UnknownFields(unknown.join(", ")));
            }
        }
        let snapshot: ContextSnapshot = serde_json::from_value(value)?;
        snapshot.validate()?;
        Ok(snapshot)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("snapshot serialization is infallible")
    }
}

/// Situationally induced impairments, derived from a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SiidFlags {
    pub voice_impaired: bool,
    pub hands_impaired: bool,
    pub vision_impaired: bool,
    pub hearing_impaired: bool,
}

impl SiidFlags {
    /// All 16 flag combinations, in binary counting order.
    pub fn all() -> impl Iterator<Item = SiidFlags> {
        (0u8..16).map(|bits| SiidFlags {
            voice_impaired: bits & 1 != 0,
            hands_impaired: bits & 2 != 0,
            vision_impaired: bits & 4 != 0,
            hearing_impaired: bits & 8 != 0,
        })
    }
}

pub fn derive_siids(snapshot: &ContextSnapshot) -> SiidFlags {
    let loud = snapshot.noise_level == NoiseLevel::Loud;
    SiidFlags {
        voice_impaired: loud || snapshot.quiet_public || snapshot.social_engagement,
        hands_impaired: snapshot.hands_occupied,
        vision_impaired: snapshot.visually_engaged,
        hearing_impaired: loud,
    }
}

/// Variants whose trigger condition holds for `snapshot`. `Default` is
/// returned alone when nothing else fires. `DivergentSetting` and
/// `EnvironmentalChanges` are never derived; scenario authors attach them.
pub fn derive_variants(snapshot: &ContextSnapshot) -> BTreeSet<ContextVariant> {
    let mut out = BTreeSet::new();
    if snapshot.urgency == Urgency::Rushed {
        out.insert(ContextVariant::TemporalUrgency);
    }
    match snapshot.familiarity {
        Familiarity::Familiar => {
            out.insert(ContextVariant::FamiliarityBased);
        }
        Familiarity::Unfamiliar => {
            out.insert(ContextVariant::UnfamiliarityBased);
        }
        Familiarity::Neutral => {}
    }
    if snapshot.hands_occupied || snapshot.visually_engaged {
        out.insert(ContextVariant::CognitiveLoad);
    }
    if snapshot.crowd_density == CrowdDensity::Crowded {
        out.insert(ContextVariant::Crowded);
    }
    if snapshot.social_engagement {
        out.insert(ContextVariant::SociallyEngaged);
    }
    if out.is_empty() {
        out.insert(ContextVariant::Default);
    }
    out
}

/// A snapshot together with everything derived from it. This is what the
/// pipelines actually operate on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Situation {
    pub snapshot: ContextSnapshot,
    pub variants: BTreeSet<ContextVariant>,
    pub siids: SiidFlags,
}

impl Situation {
    pub fn new(snapshot: ContextSnapshot) -> Self {
        Self::with_extra_variants(snapshot, std::iter::empty())
    }

    /// Adds authored variant tags on top of the derived ones. `Default` is
    /// dropped as soon as any other variant is present.
    pub fn with_extra_variants(
        snapshot: ContextSnapshot,
        extra: impl IntoIterator<Item = ContextVariant>,
    ) -> Self {
        let mut variants = derive_variants(&snapshot);
        variants.extend(extra);
        if variants.len() > 1 {
            variants.remove(&ContextVariant::Default);
        }
        let siids = derive_siids(&snapshot);
        Situation {
            snapshot,
            variants,
            siids,
        }
    }

    pub fn has(&self, variant: ContextVariant) -> bool {
        self.variants.contains(&variant)
    }
}

impl From<ContextSnapshot> for Situation {
    fn from(snapshot: ContextSnapshot) -> Self {
        Situation::new(snapshot)
    }
}

/// A partially specified snapshot. Fields present here always win over
/// anything inferred from a scene description.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnapshotOverrides {
    pub activity: Option<ActivityType>,
    pub location: Option<String>,
    pub familiarity: Option<Familiarity>,
    pub urgency: Option<Urgency>,
    pub noise_level: Option<NoiseLevel>,
    pub crowd_density: Option<CrowdDensity>,
    pub social_engagement: Option<bool>,
    pub hands_occupied: Option<bool>,
    pub visually_engaged: Option<bool>,
    pub quiet_public: Option<bool>,
    pub scene_description: Option<String>,
}

impl SnapshotOverrides {
    pub fn is_empty(&self) -> bool {
        *self == SnapshotOverrides::default()
    }

    /// Returns the snapshot if every required field is present.
    pub fn complete(&self) -> Option<ContextSnapshot> {
        Some(ContextSnapshot {
            activity: self.activity?,
            location: self.location.clone()?,
            familiarity: self.familiarity?,
            urgency: self.urgency?,
            noise_level: self.noise_level?,
            crowd_density: self.crowd_density?,
            social_engagement: self.social_engagement?,
            hands_occupied: self.hands_occupied?,
            visually_engaged: self.visually_engaged?,
            quiet_public: self.quiet_public?,
            scene_description: self.scene_description.clone(),
        })
    }

    /// Writes every present field over `base`.
    pub fn apply_to(&self, base: &mut ContextSnapshot) {
        macro_rules! put {
            ($($field:ident),*) => {
                $( if let Some(v) = &self.$field { base.$field = v.clone(); } )*
            };
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
            quiet_public
        );
        if self.scene_description.is_some() {
            base.scene_description = self.scene_description.clone();
        }
    }
}

impl From<&ContextSnapshot> for SnapshotOverrides {
    fn from(s: &ContextSnapshot) -> Self {
        SnapshotOverrides {
            activity: Some(s.activity),
            location: Some(s.location.clone()),
            familiarity: Some(s.familiarity),
            urgency: Some(s.urgency),
            noise_level: Some(s.noise_level),
            crowd_density: Some(s.crowd_density),
            social_engagement: Some(s.social_engagement),
            hands_occupied: Some(s.hands_occupied),
            visually_engaged: Some(s.visually_engaged),
            quiet_public: Some(s.quiet_public),
            scene_description: s.scene_description.clone(),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;
    use ContextVariant::*;

    pub(crate) fn arb_snapshot() -> impl Strategy<Value = ContextSnapshot> {
        (
            0usize..6,
            0usize..3,
            any::<bool>(),
            0usize..3,
            0usize..3,
            any::<[bool; 4]>(),
        )
            .prop_map(|(a, fam, rushed, noise, crowd, flags)| {
                let crowd_density = CrowdDensity::ALL[crowd];
                ContextSnapshot {
                    activity: ActivityType::ALL[a],
                    location: "somewhere".into(),
                    familiarity: Familiarity::ALL[fam],
                    urgency: if rushed {
                        Urgency::Rushed
                    } else {
                        Urgency::None
                    },
                    noise_level: NoiseLevel::ALL[noise],
                    crowd_density,
                    social_engagement: flags[0] && crowd_density != CrowdDensity::Alone,
                    hands_occupied: flags[1],
                    visually_engaged: flags[2],
                    quiet_public: flags[3],
                    scene_description: None,
                }
            })
    }

    fn set(v: &[ContextVariant]) -> BTreeSet<ContextVariant> {
        v.iter().copied().collect()
    }

    #[test]
    fn unfamiliar_and_rushed() {
        let mut s = ContextSnapshot::neutral(ActivityType::MenuReading);
        s.familiarity = Familiarity::Unfamiliar;
        s.urgency = Urgency::Rushed;
        assert_eq!(
            derive_variants(&s),
            set(&[UnfamiliarityBased, TemporalUrgency])
        );
    }

    #[test]
    fn neutral_is_default() {
        let s = ContextSnapshot::neutral(ActivityType::Cooking);
        assert_eq!(derive_variants(&s), set(&[Default]));
        assert_eq!(derive_siids(&s), SiidFlags::default());
    }

    #[test]
    fn crowded_social_hands() {
        // Rules by hand: Crowded <- crowd, SociallyEngaged <- social,
        // CognitiveLoad <- hands; familiarity neutral and no rush add nothing.
        let mut s = ContextSnapshot::neutral(ActivityType::MenuReading);
        s.crowd_density = CrowdDensity::Crowded;
        s.social_engagement = true;
        s.hands_occupied = true;
        assert_eq!(
            derive_variants(&s),
            set(&[Crowded, SociallyEngaged, CognitiveLoad])
        );
    }

    #[test]
    fn loud_impairs_voice_and_hearing() {
        let mut s = ContextSnapshot::neutral(ActivityType::Commuting);
        s.noise_level = NoiseLevel::Loud;
        let f = derive_siids(&s);
        assert!(f.voice_impaired && f.hearing_impaired);
        assert!(!f.hands_impaired && !f.vision_impaired);
    }

    #[test]
    fn hands_only() {
        let mut s = ContextSnapshot::neutral(ActivityType::Workout);
        s.hands_occupied = true;
        assert_eq!(
            derive_siids(&s),
            SiidFlags {
                hands_impaired: true,
                ..SiidFlags::default()
            }
        );
    }

    #[test]
    fn extra_variants_drop_default() {
        let s = ContextSnapshot::neutral(ActivityType::Cooking);
        let sit = Situation::with_extra_variants(s, [EnvironmentalChanges]);
        assert_eq!(sit.variants, set(&[EnvironmentalChanges]));
    }

    #[test]
    fn strict_json_rejects_unknown_keys() {
        let mut v = serde_json::to_value(ContextSnapshot::neutral(ActivityType::Cooking)).unwrap();
        v["mood"] = serde_json::json!("happy");
        let text = v.to_string();
        assert!(matches!(
            ContextSnapshot::from_json_str(&text, Strictness::Strict),
            Err(SnapshotError::UnknownFields(f)) if f == "mood"
        ));
        assert!(ContextSnapshot::from_json_str(&text, Strictness::Lenient).is_ok());
    }

    #[test]
    fn json_requires_explicit_booleans_and_legal_enums() {
        let mut v = serde_json::to_value(ContextSnapshot::neutral(ActivityType::Cooking)).unwrap();
        v.as_object_mut().unwrap().remove("hands_occupied");
        assert!(ContextSnapshot::from_json_value(v, Strictness::Lenient).is_err());

        let mut v = serde_json::to_value(ContextSnapshot::neutral(ActivityType::Cooking)).unwrap();
        v["activity"] = serde_json::json!("driving");
        assert!(ContextSnapshot::from_json_value(v, Strictness::Strict).is_err());
    }

    #[test]
    fn alone_cannot_be_socially_engaged() {
        let mut s = ContextSnapshot::neutral(ActivityType::Cooking);
        s.social_engagement = true;
        let text = s.to_json_string();
        assert!(matches!(
            ContextSnapshot::from_json_str(&text, Strictness::Strict),
            Err(SnapshotError::Invalid(_))
        ));
    }

    #[test]
    fn overrides_apply_and_complete() {
        let s = ContextSnapshot::neutral(ActivityType::Cooking);
        let o = SnapshotOverrides::from(&s);
        assert_eq!(o.complete(), Some(s.clone()));
        let partial = SnapshotOverrides {
            urgency: Some(Urgency::Rushed),
            ..SnapshotOverrides::default()
        };
        assert!(partial.complete().is_none());
        let mut base = s.clone();
        partial.apply_to(&mut base);
        assert_eq!(base.urgency, Urgency::Rushed);
        assert_eq!(base.activity, s.activity);
    }

    /// Every trigger that can be switched on from a neutral position.
    fn add_trigger(mut s: ContextSnapshot, which: usize) -> ContextSnapshot {
        match which {
            0 => s.urgency = Urgency::Rushed,
            1 => s.hands_occupied = true,
            2 => s.visually_engaged = true,
            3 => s.crowd_density = CrowdDensity::Crowded,
            4 => {
                if s.crowd_density == CrowdDensity::Alone {
                    s.crowd_density = CrowdDensity::Sparse;
                }
                s.social_engagement = true;
            }
            _ => {
                if s.familiarity == Familiarity::Neutral {
                    s.familiarity = Familiarity::Familiar;
                }
            }
        }
        s
    }

    proptest! {
        #[test]
        fn siid_formulas_hold(s in arb_snapshot()) {
            let f = derive_siids(&s);
            let loud = s.noise_level == NoiseLevel::Loud;
            prop_assert_eq!(f.voice_impaired, loud || s.quiet_public || s.social_engagement);
            prop_assert_eq!(f.hands_impaired, s.hands_occupied);
            prop_assert_eq!(f.vision_impaired, s.visually_engaged);
            prop_assert_eq!(f.hearing_impaired, loud);
        }

        #[test]
        fn variants_are_monotone(s in arb_snapshot(), which in 0usize..6) {
            let before = derive_variants(&s);
            let after = derive_variants(&add_trigger(s.clone(), which));
            prop_assert_eq!(before.contains(&Default), before.len() == 1 && before.contains(&Default));
            for v in before.iter().filter(|v| **v != Default) {
                prop_assert!(after.contains(v), "lost {:?}", v);
            }
            prop_assert_eq!(derive_variants(&s), before);
        }

        #[test]
        fn snapshot_json_roundtrip(s in arb_snapshot()) {
            let back = ContextSnapshot::from_json_str(&s.to_json_string(), Strictness::Strict).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
