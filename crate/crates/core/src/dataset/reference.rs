//! Reference figures from the annotation study and a synthetic dataset
//! rebuilt from its published action-by-context counts.
//!
//! The synthetic dataset has one row per counted (action category, context
//! variant) entry. Participants, activities, query types, modalities and
//! ratings are filled in by fixed cycles; they carry no information.

use std::io::Write;

use super::{AnnotationEntry, StatsReport, CSV_HEADER};
use crate::context::ActionCategory::{self, *};
use crate::context::ActivityType;
use crate::context::ContextVariant::{self, *};
use crate::recommendation::{PresentationModality, QueryType};

/// Published counts of desired actions per context variant.
pub const ACTION_CONTEXT_COUNTS: [(ActionCategory, ContextVariant, usize); 40] = [
    (Automate, Default, 6),
    (Automate, CognitiveLoad, 13),
    (Automate, FamiliarityBased, 46),
    (Automate, UnfamiliarityBased, 10),
    (Automate, DivergentSetting, 11),
    (Automate, TemporalUrgency, 13),
    (Guide, Default, 11),
    (Guide, UnfamiliarityBased, 34),
    (Guide, DivergentSetting, 9),
    (Guide, EnvironmentalChanges, 17),
    (InformationRetrieval, Default, 7),
    (InformationRetrieval, UnfamiliarityBased, 39),
    (InformationRetrieval, DivergentSetting, 22),
    (InformationRetrieval, EnvironmentalChanges, 6),
    (InformationRetrieval, TemporalUrgency, 18),
    (Remind, Default, 26),
    (Remind, CognitiveLoad, 18),
    (Remind, FamiliarityBased, 21),
    (Remind, DivergentSetting, 21),
    (Remind, TemporalUrgency, 33),
    (Suggest, Default, 43),
    (Suggest, CognitiveLoad, 31),
    (Suggest, FamiliarityBased, 41),
    (Suggest, UnfamiliarityBased, 14),
    (Suggest, SociallyEngaged, 134),
    (Suggest, Crowded, 52),
    (Suggest, DivergentSetting, 23),
    (Suggest, TemporalUrgency, 30),
    (Summarize, Default, 4),
    (Summarize, CognitiveLoad, 6),
    (Summarize, TemporalUrgency, 4),
    (TakeAppAction, Default, 24),
    (TakeAppAction, CognitiveLoad, 12),
    (TakeAppAction, SociallyEngaged, 42),
    (TakeAppAction, DivergentSetting, 24),
    (TakeAppAction, TemporalUrgency, 13),
    (VisualAugmentation, Default, 3),
    (VisualAugmentation, Crowded, 47),
    (VisualAugmentation, EnvironmentalChanges, 16),
    (VisualAugmentation, DivergentSetting, 5),
];

/// Headline numbers reported for the annotation study.
pub struct ReferenceFigures;

impl ReferenceFigures {
    pub const TOTAL_ENTRIES: usize = 960;
    pub const USEFUL_ENTRIES: usize = 937;
    pub const USEFUL_PERCENT: f64 = 97.6;
    pub const MULTI_CHOICE_PERCENT: f64 = 42.0;
    pub const BINARY_PERCENT: f64 = 36.0;
    pub const ICON_PERCENT: f64 = 22.0;
    pub const AUDIO_VISUAL_PERCENT: f64 = 38.0;
    pub const CONSISTENT_PAIRS: usize = 23;
    pub const CONSISTENCY_PAIRS: usize = 240;
    pub const PARTICIPANTS: usize = 40;

    /// Sum of [`ACTION_CONTEXT_COUNTS`].
    pub fn action_context_total() -> usize {
        ACTION_CONTEXT_COUNTS.iter().map(|r| r.2).sum()
    }
}

/// Synthetic entries reproducing [`ACTION_CONTEXT_COUNTS`] exactly.
pub fn action_context_dataset() -> Vec<AnnotationEntry> {
    let mut out = Vec::with_capacity(ReferenceFigures::action_context_total());
    let mut i = 0usize;
    for (category, variant, count) in ACTION_CONTEXT_COUNTS {
        for _ in 0..count {
            let query_type = match i % 50 {
                0..=20 => QueryType::MultiChoice,
                21..=38 => QueryType::Binary,
                _ => QueryType::Icon,
            };
            let modality = match i % 50 {
                0..=18 => PresentationModality::AudioVisual,
                19..=36 => PresentationModality::VisualOnly,
                _ => PresentationModality::AudioOnly,
            };
            out.push(AnnotationEntry {
                participant_id: format!("S{:02}", i % ReferenceFigures::PARTICIPANTS + 1),
                activity: ActivityType::ALL
                    [(i / ReferenceFigures::PARTICIPANTS) % ActivityType::ALL.len()],
                variant,
                action_text: format!("synthetic {} / {}", category.as_str(), variant.as_str()),
                action_category: category,
                query_type,
                modality,
                usefulness: 2 + (i % 4) as u8,
            });
            i += 1;
        }
    }
    out
}

pub fn write_csv(entries: &[AnnotationEntry], out: impl Write) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for e in entries {
        writer.serialize(e)?;
    }
    writer.flush()?;
    Ok(())
}

/// Human-readable differences between a report and the reference figures.
pub fn compare_with_reference(report: &StatsReport) -> Vec<String> {
    let mut notes = Vec::new();
    let reference_total = ReferenceFigures::action_context_total();
    if report.useful_entries != ReferenceFigures::USEFUL_ENTRIES {
        notes.push(format!(
            "useful entries: {} here vs {} reported",
            report.useful_entries,
            ReferenceFigures::USEFUL_ENTRIES
        ));
    }
    if reference_total != ReferenceFigures::USEFUL_ENTRIES {
        notes.push(format!(
            "the reported action-by-context counts sum to {reference_total}, not to the {} useful entries reported alongside them",
            ReferenceFigures::USEFUL_ENTRIES
        ));
    }
    if report.consistency_denominator != ReferenceFigures::CONSISTENCY_PAIRS {
        notes.push(format!(
            "consistency is over {} participant-activity pairs present in the data; the reported denominator is {} (every participant x every activity)",
            report.consistency_denominator,
            ReferenceFigures::CONSISTENCY_PAIRS
        ));
    }
    let mismatched = ACTION_CONTEXT_COUNTS
        .iter()
        .filter(|(c, v, n)| report.count(*c, *v) != *n)
        .count();
    if mismatched > 0 {
        notes.push(format!(
            "{mismatched} of {} reported action-by-context cells differ",
            ACTION_CONTEXT_COUNTS.len()
        ));
    }
    notes
}
