use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use super::{RunRecord, Stage, UserInput};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatencyStats {
    pub count: usize,
    pub mean_ms: f64,
    /// Population standard deviation.
    pub std_dev_ms: f64,
    pub max_ms: f64,
}

impl LatencyStats {
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Some(LatencyStats {
            count: samples.len(),
            mean_ms: mean,
            std_dev_ms: var.sqrt(),
            max_ms: samples.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub passed: usize,
    pub failed: usize,
    pub latency: BTreeMap<Stage, LatencyStats>,
    pub records: Vec<RunRecord>,
}

impl SuiteSummary {
    pub fn from_records(records: Vec<RunRecord>) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        let mut samples: BTreeMap<Stage, Vec<f64>> = BTreeMap::new();
        for r in &records {
            for (&stage, &ms) in &r.latencies {
                samples.entry(stage).or_default().push(ms);
            }
        }
        SuiteSummary {
            passed,
            failed: records.len() - passed,
            latency: samples
                .into_iter()
                .filter_map(|(stage, s)| LatencyStats::from_samples(&s).map(|l| (stage, l)))
                .collect(),
            records,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<28}{:<6}{:<14}{:<14}{:<16}{:>10}",
            "scenario", "pass", "query", "presentation", "input", "gen ms"
        );
        for r in &self.records {
            let query = r.suggestion.as_ref().map_or("-", |s| s.query_type.as_str());
            let presentation = r.plan.as_ref().map_or("-", |p| p.presentation.as_str());
            let input = match &r.user_input {
                UserInput::Recognized(i) => format!("{}:{}", i.modality, i.value),
                UserInput::Timeout(_) => "timeout".to_string(),
                UserInput::NotReached => "-".to_string(),
            };
            let gen = r.latencies.get(&Stage::Generation).copied().unwrap_or(0.0);
            let _ = writeln!(
                out,
                "{:<28}{:<6}{:<14}{:<14}{:<16}{:>10.2}",
                r.scenario_id,
                if r.pass { "ok" } else { "FAIL" },
                query,
                presentation,
                input,
                gen
            );
            for d in &r.diffs {
                let _ = writeln!(
                    out,
                    "    {}: expected {}, got {}",
                    d.field, d.expected, d.actual
                );
            }
            for e in &r.errors {
                let _ = writeln!(out, "    {:?} failed: {}", e.stage, e.message);
            }
        }
        let _ = writeln!(out, "\n{} passed, {} failed", self.passed, self.failed);
        for (stage, l) in &self.latency {
            let _ = writeln!(
                out,
                "{:<12} mean {:>8.2} ms  sd {:>7.2} ms  max {:>8.2} ms  (n={})",
                format!("{stage:?}").to_lowercase(),
                l.mean_ms,
                l.std_dev_ms,
                l.max_ms,
                l.count
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latency_stats_oracle() {
        let l = LatencyStats::from_samples(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
        assert_eq!(l.mean_ms, 5.0);
        assert_eq!(l.std_dev_ms, 2.0);
        assert_eq!(l.max_ms, 9.0);
        assert!(LatencyStats::from_samples(&[]).is_none());
    }
}
