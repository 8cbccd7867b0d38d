//! Annotation datasets and the distribution and consistency statistics
//! computed from them.

mod reference;
mod stats;

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::context::{ActionCategory, ActivityType, ContextVariant};
use crate::recommendation::{PresentationModality, QueryType};

pub use reference::{
    action_context_dataset, compare_with_reference, write_csv, ReferenceFigures,
    ACTION_CONTEXT_COUNTS,
};
pub use stats::{compute_stats, consistency_metric, shares_to_tenths, StatsReport};

pub const CSV_HEADER: [&str; 8] = [
    "participant_id",
    "activity",
    "variant",
    "action_text",
    "action_category",
    "query_type",
    "modality",
    "usefulness",
];

/// One participant's answer for one scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationEntry {
    pub participant_id: String,
    pub activity: ActivityType,
    pub variant: ContextVariant,
    pub action_text: String,
    pub action_category: ActionCategory,
    pub query_type: QueryType,
    pub modality: PresentationModality,
    /// 5-point Likert rating; 1 means no help was wanted.
    pub usefulness: u8,
}

/// A problem with one data row. `row` counts data rows from 1, so the
/// header line is not row 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowError {
    pub row: usize,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("reading dataset: {0}")]
    Io(#[from] std::io::Error),
    #[error("unexpected CSV header {found:?}; expected {}", CSV_HEADER.join(","))]
    Header { found: Vec<String> },
    #[error("{} invalid row(s): {}", .0.len(), summarize(.0))]
    Validation(Vec<RowError>),
    #[error("dataset has no entries to analyse")]
    EmptyDataset,
}

fn summarize(errors: &[RowError]) -> String {
    errors
        .iter()
        .map(|e| format!("row {}: {}", e.row, e.message))
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn load_dataset(path: &Path) -> Result<Vec<AnnotationEntry>, DatasetError> {
    read_dataset(std::fs::File::open(path)?)
}

/// Parses CSV with the declared header. Every row is validated and all
/// failures are reported together.
pub fn read_dataset(input: impl Read) -> Result<Vec<AnnotationEntry>, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| DatasetError::Io(std::io::Error::other(e)))?
        .clone();
    if headers.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(DatasetError::Header {
            found: headers.iter().map(str::to_string).collect(),
        });
    }
    let mut entries = Vec::new();
    let mut errors = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let parsed = record
            .map_err(|e| e.to_string())
            .and_then(|r| {
                r.deserialize::<AnnotationEntry>(Some(&headers))
                    .map_err(|e| e.to_string())
            })
            .and_then(|entry| {
                if (1..=5).contains(&entry.usefulness) {
                    Ok(entry)
                } else {
                    Err(format!("usefulness {} outside 1..=5", entry.usefulness))
                }
            });
        match parsed {
            Ok(entry) => entries.push(entry),
            Err(message) => errors.push(RowError { row, message }),
        }
    }
    if errors.is_empty() {
        Ok(entries)
    } else {
        Err(DatasetError::Validation(errors))
    }
}

/// Entries where the participant wanted proactive help (usefulness > 1).
pub fn filter_useful(entries: &[AnnotationEntry]) -> Vec<AnnotationEntry> {
    entries
        .iter()
        .filter(|e| e.usefulness > 1)
        .cloned()
        .collect()
}
