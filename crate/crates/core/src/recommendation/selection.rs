//! Few-shot exemplar selection by contextual similarity.

use std::cmp::Reverse;

use crate::context::Situation;

use super::types::Exemplar;

/// Number of exemplars placed in a prompt.
pub const DEFAULT_SHOTS: usize = 6;

pub const ACTIVITY_WEIGHT: u32 = 2;

/// Similarity of an exemplar to the current situation:
/// `2 * [same activity] + |shared variants|`.
pub fn similarity(situation: &Situation, exemplar: &Exemplar) -> u32 {
    let same = u32::from(exemplar.tags.activity == situation.snapshot.activity);
    let shared = exemplar
        .tags
        .variants
        .iter()
        .filter(|v| situation.variants.contains(v))
        .count() as u32;
    ACTIVITY_WEIGHT * same + shared
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection<'a> {
    /// Chosen exemplars, best first.
    pub exemplars: Vec<&'a Exemplar>,
    /// Pool positions of the chosen exemplars.
    pub indices: Vec<usize>,
    pub requested: usize,
    /// Set when the pool held fewer than `requested` exemplars.
    pub short_pool: bool,
}

/// Picks `k` exemplars. Exemplars sharing the activity always come first;
/// within each group, higher similarity first, then pool order. Others only
/// fill slots the same-activity group cannot.
pub fn select_exemplars<'a>(
    situation: &Situation,
    pool: &'a [Exemplar],
    k: usize,
) -> Selection<'a> {
    let k = k.max(1);
    let activity = situation.snapshot.activity;
    let (mut same, mut other): (Vec<_>, Vec<_>) = pool
        .iter()
        .enumerate()
        .map(|(i, ex)| (similarity(situation, ex), i))
        .partition(|&(_, i)| pool[i].tags.activity == activity);

    let take = |group: &mut Vec<(u32, usize)>, n: usize| -> Vec<usize> {
        group.sort_by_key(|&(score, i)| (Reverse(score), i));
        group.iter().take(n).map(|&(_, i)| i).collect()
    };
    let mut indices = take(&mut same, k);
    let missing = k - indices.len();
    if missing > 0 {
        indices.extend(take(&mut other, missing));
    }

    Selection {
        exemplars: indices.iter().map(|&i| &pool[i]).collect(),
        indices,
        requested: k,
        short_pool: pool.len() < k,
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::context::{ActivityType, ContextSnapshot, ContextVariant, Familiarity, Urgency};
    use crate::recommendation::types::{
        default_pool, ExemplarTags, PresentationModality, QueryType,
    };

    fn table_rows() -> Vec<Exemplar> {
        let pool = default_pool();
        let pick = |needle: &str| {
            pool.iter()
                .find(|e| e.context_text.contains(needle))
                .unwrap()
                .clone()
        };
        vec![
            pick("User is in a museum, crowded with people"),
            pick("User is in a familiar grocery store but is in a rush"),
            pick("User is alone in a new restaurant"),
        ]
    }

    #[test]
    fn grocery_rush_picks_grocery_row() {
        let mut snap = ContextSnapshot::neutral(ActivityType::GroceryShopping);
        snap.urgency = Urgency::Rushed;
        let sit = Situation::new(snap);
        assert_eq!(
            sit.variants,
            BTreeSet::from([ContextVariant::TemporalUrgency])
        );
        let pool = table_rows();
        let sel = select_exemplars(&sit, &pool, 1);
        assert_eq!(sel.indices, vec![1]);
        assert!(!sel.short_pool);
    }

    #[test]
    fn k_equal_to_pool_is_permutation() {
        let pool = default_pool();
        let mut snap = ContextSnapshot::neutral(ActivityType::Cooking);
        snap.familiarity = Familiarity::Unfamiliar;
        let sel = select_exemplars(&Situation::new(snap), &pool, pool.len());
        let mut idx = sel.indices.clone();
        idx.sort_unstable();
        assert_eq!(idx, (0..pool.len()).collect::<Vec<_>>());
    }

    #[test]
    fn short_pool_is_flagged() {
        let pool = table_rows();
        let sit = Situation::new(ContextSnapshot::neutral(ActivityType::Commuting));
        let sel = select_exemplars(&sit, &pool, 6);
        assert_eq!(sel.exemplars.len(), 3);
        assert!(sel.short_pool);
    }

    #[test]
    fn same_activity_outranks_variant_overlap() {
        let ex = |activity, variants: &[ContextVariant]| Exemplar {
            context_text: "c".into(),
            reasoning: "r".into(),
            action_text: "a".into(),
            query_type: QueryType::Binary,
            modality: PresentationModality::AudioVisual,
            tags: ExemplarTags {
                activity,
                variants: variants.iter().copied().collect(),
            },
        };
        use ContextVariant::*;
        let pool = vec![
            ex(
                ActivityType::Cooking,
                &[Crowded, SociallyEngaged, TemporalUrgency],
            ),
            ex(ActivityType::Workout, &[Default]),
        ];
        let mut snap = ContextSnapshot::neutral(ActivityType::Workout);
        snap.crowd_density = crate::context::CrowdDensity::Crowded;
        snap.social_engagement = true;
        snap.urgency = Urgency::Rushed;
        let sit = Situation::new(snap);
        assert_eq!(similarity(&sit, &pool[0]), 3);
        assert_eq!(similarity(&sit, &pool[1]), 2);
        assert_eq!(select_exemplars(&sit, &pool, 1).indices, vec![1]);
    }
}
