use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use serde::Serialize;

use super::{filter_useful, AnnotationEntry, DatasetError};
use crate::context::{ActionCategory, ContextVariant};
use crate::recommendation::{PresentationModality, QueryType};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub total_entries: usize,
    pub useful_entries: usize,
    /// Useful entries as a percentage of all entries, to one decimal.
    pub useful_percent: f64,
    pub query_type_shares: BTreeMap<QueryType, f64>,
    pub modality_shares: BTreeMap<PresentationModality, f64>,
    /// Query-type shares within each variant present in the data.
    pub per_variant_query_shares: BTreeMap<ContextVariant, BTreeMap<QueryType, f64>>,
    pub action_context_table: BTreeMap<ActionCategory, BTreeMap<ContextVariant, usize>>,
    pub consistency_pairs: usize,
    pub consistency_denominator: usize,
}

/// Percentages to one decimal that sum to exactly 100 (largest remainder).
/// Ties in the remainder go to the earlier key. All-zero counts give zeros.
pub fn shares_to_tenths<K: Ord + Copy>(counts: &BTreeMap<K, usize>) -> BTreeMap<K, f64> {
    let total: usize = counts.values().sum();
    if total == 0 {
        return counts.keys().map(|&k| (k, 0.0)).collect();
    }
    let mut tenths: Vec<(K, usize, usize)> = counts
        .iter()
        .map(|(&k, &c)| (k, 1000 * c / total, 1000 * c % total))
        .collect();
    let assigned: usize = tenths.iter().map(|t| t.1).sum();
    let mut order: Vec<usize> = (0..tenths.len()).collect();
    order.sort_by(|&a, &b| tenths[b].2.cmp(&tenths[a].2).then(a.cmp(&b)));
    for &i in order.iter().take(1000 - assigned) {
        tenths[i].1 += 1;
    }
    tenths
        .into_iter()
        .map(|(k, t, _)| (k, t as f64 / 10.0))
        .collect()
}

fn tally<K: Ord + Copy>(keys: impl IntoIterator<Item = K>, all: &[K]) -> BTreeMap<K, usize> {
    let mut counts: BTreeMap<K, usize> = all.iter().map(|&k| (k, 0)).collect();
    for k in keys {
        *counts.entry(k).or_default() += 1;
    }
    counts
}

/// Pairs of (participant, activity) with at least two entries, and how many
/// of them use a single query type in at least 80% of their entries.
/// Returns `(consistent, pairs)`.
pub fn consistency_metric(entries: &[AnnotationEntry]) -> (usize, usize) {
    let mut groups: HashMap<(&str, _), BTreeMap<QueryType, usize>> = HashMap::new();
    for e in entries {
        *groups
            .entry((e.participant_id.as_str(), e.activity))
            .or_default()
            .entry(e.query_type)
            .or_default() += 1;
    }
    let mut pairs = 0;
    let mut consistent = 0;
    for counts in groups.values() {
        let n: usize = counts.values().sum();
        if n < 2 {
            continue;
        }
        pairs += 1;
        let top = counts.values().copied().max().unwrap_or(0);
        if 5 * top >= 4 * n {
            consistent += 1;
        }
    }
    (consistent, pairs)
}

/// Statistics over the entries that wanted help. `total_entries` counts
/// the input as given.
pub fn compute_stats(entries: &[AnnotationEntry]) -> Result<StatsReport, DatasetError> {
    if entries.is_empty() {
        return Err(DatasetError::EmptyDataset);
    }
    let useful = filter_useful(entries);
    if useful.is_empty() {
        return Err(DatasetError::EmptyDataset);
    }
    let query_counts = tally(useful.iter().map(|e| e.query_type), QueryType::ALL);
    let modality_counts = tally(useful.iter().map(|e| e.modality), PresentationModality::ALL);

    let mut per_variant: BTreeMap<ContextVariant, BTreeMap<QueryType, usize>> = BTreeMap::new();
    let mut table: BTreeMap<ActionCategory, BTreeMap<ContextVariant, usize>> = BTreeMap::new();
    for e in &useful {
        *per_variant
            .entry(e.variant)
            .or_insert_with(|| tally([], QueryType::ALL))
            .entry(e.query_type)
            .or_default() += 1;
        *table
            .entry(e.action_category)
            .or_default()
            .entry(e.variant)
            .or_default() += 1;
    }
    let (consistency_pairs, consistency_denominator) = consistency_metric(&useful);
    let useful_percent = shares_to_tenths(&BTreeMap::from([
        (0, useful.len()),
        (1, entries.len() - useful.len()),
    ]))[&0];

    Ok(StatsReport {
        total_entries: entries.len(),
        useful_entries: useful.len(),
        useful_percent,
        query_type_shares: shares_to_tenths(&query_counts),
        modality_shares: shares_to_tenths(&modality_counts),
        per_variant_query_shares: per_variant
            .iter()
            .map(|(&v, c)| (v, shares_to_tenths(c)))
            .collect(),
        action_context_table: table,
        consistency_pairs,
        consistency_denominator,
    })
}

impl StatsReport {
    pub fn count(&self, category: ActionCategory, variant: ContextVariant) -> usize {
        self.action_context_table
            .get(&category)
            .and_then(|row| row.get(&variant))
            .copied()
            .unwrap_or(0)
    }

    /// Plain-text tables for terminals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "entries: {} total, {} useful ({:.1}%)",
            self.total_entries, self.useful_entries, self.useful_percent
        );
        let _ = writeln!(
            out,
            "consistent participant-activity pairs: {} of {}",
            self.consistency_pairs, self.consistency_denominator
        );
        out.push_str("\nquery type shares\n");
        for (q, share) in &self.query_type_shares {
            let _ = writeln!(out, "  {:<14}{share:>6.1}%", q.as_str());
        }
        out.push_str("\nmodality shares\n");
        for (m, share) in &self.modality_shares {
            let _ = writeln!(out, "  {:<14}{share:>6.1}%", m.as_str());
        }
        out.push_str("\nquery type by variant (%)\n");
        let _ = writeln!(
            out,
            "  {:<22}{:>14}{:>10}{:>8}",
            "variant", "multi_choice", "binary", "icon"
        );
        for (v, shares) in &self.per_variant_query_shares {
            let get = |q| shares.get(&q).copied().unwrap_or(0.0);
            let _ = writeln!(
                out,
                "  {:<22}{:>14.1}{:>10.1}{:>8.1}",
                v.as_str(),
                get(QueryType::MultiChoice),
                get(QueryType::Binary),
                get(QueryType::Icon)
            );
        }
        out.push_str("\naction category x context variant\n");
        for (category, row) in &self.action_context_table {
            for (variant, n) in row {
                let _ = writeln!(
                    out,
                    "  {:<24}{:<24}{n:>5}",
                    category.as_str(),
                    variant.as_str()
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    use super::*;
    use crate::context::ActivityType;

    pub(crate) fn entry(
        participant: &str,
        activity: ActivityType,
        query: QueryType,
        usefulness: u8,
    ) -> AnnotationEntry {
        AnnotationEntry {
            participant_id: participant.into(),
            activity,
            variant: ContextVariant::Default,
            action_text: "x".into(),
            action_category: ActionCategory::Suggest,
            query_type: query,
            modality: PresentationModality::VisualOnly,
            usefulness,
        }
    }

    #[test]
    fn largest_remainder() {
        let m = BTreeMap::from([(0, 1), (1, 1), (2, 1)]);
        assert_eq!(
            shares_to_tenths(&m),
            BTreeMap::from([(0, 33.4), (1, 33.3), (2, 33.3)])
        );
        let m = BTreeMap::from([(0, 2), (1, 1), (2, 0)]);
        assert_eq!(
            shares_to_tenths(&m),
            BTreeMap::from([(0, 66.7), (1, 33.3), (2, 0.0)])
        );
        let m = BTreeMap::from([(0, 937), (1, 23)]);
        assert_eq!(shares_to_tenths(&m)[&0], 97.6);
    }

    #[test]
    fn constructed_shares_come_back_exactly() {
        let mut entries = Vec::new();
        for (q, n) in [
            (QueryType::MultiChoice, 42),
            (QueryType::Binary, 36),
            (QueryType::Icon, 22),
        ] {
            entries.extend((0..n).map(|i| entry(&format!("P{i}"), ActivityType::Cooking, q, 4)));
        }
        let r = compute_stats(&entries).unwrap();
        assert_eq!(r.query_type_shares[&QueryType::MultiChoice], 42.0);
        assert_eq!(r.query_type_shares[&QueryType::Binary], 36.0);
        assert_eq!(r.query_type_shares[&QueryType::Icon], 22.0);
    }

    #[test]
    fn single_entry_is_all_of_its_cells() {
        let r = compute_stats(&[entry("P1", ActivityType::Workout, QueryType::Icon, 3)]).unwrap();
        assert_eq!(r.query_type_shares[&QueryType::Icon], 100.0);
        assert_eq!(r.modality_shares[&PresentationModality::VisualOnly], 100.0);
        assert_eq!(
            r.per_variant_query_shares[&ContextVariant::Default][&QueryType::Icon],
            100.0
        );
        assert_eq!(r.count(ActionCategory::Suggest, ContextVariant::Default), 1);
        assert_eq!(r.useful_percent, 100.0);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            compute_stats(&[]),
            Err(DatasetError::EmptyDataset)
        ));
        let unhelpful = [entry("P1", ActivityType::Workout, QueryType::Icon, 1)];
        assert!(matches!(
            compute_stats(&unhelpful),
            Err(DatasetError::EmptyDataset)
        ));
    }

    #[test]
    fn consistency_boundary_is_inclusive() {
        let mut e: Vec<_> = (0..8)
            .map(|_| entry("A", ActivityType::Cooking, QueryType::Binary, 3))
            .collect();
        assert_eq!(consistency_metric(&e), (1, 1));
        e = (0..4)
            .map(|_| entry("B", ActivityType::Cooking, QueryType::Binary, 3))
            .collect();
        e.push(entry("B", ActivityType::Cooking, QueryType::Icon, 3));
        assert_eq!(consistency_metric(&e), (1, 1));
        e.push(entry("B", ActivityType::Cooking, QueryType::Icon, 3));
        assert_eq!(consistency_metric(&e), (0, 1));
        // A pair with a single entry is not counted at all.
        assert_eq!(
            consistency_metric(&[entry("C", ActivityType::Cooking, QueryType::Binary, 3)]),
            (0, 0)
        );
    }

    fn arb_entry() -> impl Strategy<Value = AnnotationEntry> {
        (
            0usize..5,
            0usize..6,
            0usize..9,
            0usize..8,
            0usize..3,
            0usize..3,
            1u8..=5,
        )
            .prop_map(|(p, a, v, c, q, m, u)| AnnotationEntry {
                participant_id: format!("P{p}"),
                activity: ActivityType::ALL[a],
                variant: ContextVariant::ALL[v],
                action_text: String::new(),
                action_category: ActionCategory::ALL[c],
                query_type: QueryType::ALL[q],
                modality: PresentationModality::ALL[m],
                usefulness: u,
            })
    }

    fn sum(m: &BTreeMap<impl Ord, f64>) -> f64 {
        m.values().sum()
    }

    proptest! {
        #[test]
        fn invariants(entries in proptest::collection::vec(arb_entry(), 1..120), seed in any::<u64>()) {
            let Ok(report) = compute_stats(&entries) else {
                prop_assert!(filter_useful(&entries).is_empty());
                return Ok(());
            };
            prop_assert!((sum(&report.query_type_shares) - 100.0).abs() <= 0.1);
            prop_assert!((sum(&report.modality_shares) - 100.0).abs() <= 0.1);
            for row in report.per_variant_query_shares.values() {
                prop_assert!((sum(row) - 100.0).abs() <= 0.1);
            }
            let cells: usize = report.action_context_table.values().flat_map(|r| r.values()).sum();
            prop_assert_eq!(cells, report.useful_entries);

            let mut shuffled = entries.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(compute_stats(&shuffled).unwrap(), report);
        }
    }
}
