//! Observed confusion counts and precision/recall/F1/accuracy of a
//! candidate system against majority ground truth, plus averaging
//! across several human raters.
//!
//! Undefined metrics are first class: a zero denominator yields `None`
//! (rendered as NaN in reports), never a silent zero, because coercing
//! to zero would corrupt rater averages on empty-positive strata.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::stratify::{ItemConsensus, Majority, Stratum};

/// The four reported classification metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    F1,
    Precision,
    Recall,
    Accuracy,
}

impl Metric {
    /// Report order: F1 first, matching the usual scorecard layout.
    pub const ALL: [Metric; 4] = [
        Metric::F1,
        Metric::Precision,
        Metric::Recall,
        Metric::Accuracy,
    ];
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Metric::F1 => "f1",
            Metric::Precision => "precision",
            Metric::Recall => "recall",
            Metric::Accuracy => "accuracy",
        };
        f.write_str(name)
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(Metric::F1),
            "precision" | "p" => Ok(Metric::Precision),
            "recall" | "r" => Ok(Metric::Recall),
            "accuracy" | "a" | "acc" => Ok(Metric::Accuracy),
            other => Err(Error::Config(format!("unknown metric `{other}`"))),
        }
    }
}

/// Confusion counts of one candidate on one stratum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tpc: u64,
    pub fpc: u64,
    pub fnc: u64,
    pub tnc: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tpc + self.fpc + self.fnc + self.tnc
    }

    /// Merge counts from another stratum of the same candidate.
    pub fn accumulate(&mut self, other: &ConfusionCounts) {
        self.tpc += other.tpc;
        self.fpc += other.fpc;
        self.fnc += other.fnc;
        self.tnc += other.tnc;
    }
}

/// Count a candidate's predictions against the stratum's majority labels.
///
/// Positive means "majority label is positive". Every item in the
/// stratum must have a prediction; a skipped item is an error rather
/// than a silently shrunken denominator.
pub fn confusion(
    stratum: &Stratum,
    consensus: &BTreeMap<String, ItemConsensus>,
    predictions: &BTreeMap<&str, Label>,
    system_id: &str,
) -> Result<ConfusionCounts> {
    let mut counts = ConfusionCounts::default();
    for item_id in &stratum.item_ids {
        let truth = match consensus.get(item_id).map(|c| c.majority) {
            Some(Majority::Label(label)) => label,
            _ => continue, // tied items never enter metric strata
        };
        let predicted =
            *predictions
                .get(item_id.as_str())
                .ok_or_else(|| Error::MissingPrediction {
                    system_id: system_id.to_string(),
                    item_id: item_id.clone(),
                    task_id: stratum.task_id.clone(),
                })?;
        match (truth, predicted) {
            (Label::Positive, Label::Positive) => counts.tpc += 1,
            (Label::Positive, Label::Negative) => counts.fnc += 1,
            (Label::Negative, Label::Positive) => counts.fpc += 1,
            (Label::Negative, Label::Negative) => counts.tnc += 1,
        }
    }
    Ok(counts)
}

/// Metric values of one candidate on one stratum; `None` is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub accuracy: Option<f64>,
}

impl MetricSet {
    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
            Metric::F1 => self.f1,
            Metric::Accuracy => self.accuracy,
        }
    }
}

/// Compute the standard metrics from confusion counts.
///
/// Precision is undefined when tp+fp = 0, recall when tp+fn = 0, F1 when
/// either is undefined or both are zero; accuracy is always defined for
/// a non-empty stratum.
pub fn metrics(counts: &ConfusionCounts) -> Result<MetricSet> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::EmptyStratum);
    }
    let ratio = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
    let precision = ratio(counts.tpc, counts.tpc + counts.fpc);
    let recall = ratio(counts.tpc, counts.tpc + counts.fnc);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    let accuracy = Some((counts.tpc + counts.tnc) as f64 / total as f64);
    Ok(MetricSet {
        precision,
        recall,
        f1,
        accuracy,
    })
}

/// Mean and population standard deviation of one metric across raters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RaterAverage {
    pub mean: f64,
    /// Population standard deviation: the raters are the entire panel
    /// being summarized, not a sample from a larger one.
    pub std: f64,
    pub n_raters: usize,
    /// Raters whose value was undefined on this stratum.
    pub n_excluded: usize,
}

/// Average one metric across raters, excluding undefined values.
pub fn rater_average(values: &[Option<f64>]) -> Result<RaterAverage> {
    let defined: Vec<f64> = values.iter().flatten().copied().collect();
    if defined.is_empty() {
        return Err(Error::AllUndefined);
    }
    let n = defined.len() as f64;
    let mean = defined.iter().sum::<f64>() / n;
    let variance = defined.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(RaterAverage {
        mean,
        std: variance.sqrt(),
        n_raters: defined.len(),
        n_excluded: values.len() - defined.len(),
    })
}

/// The human-minus-model gap for one metric on one stratum.
pub fn delta(human: &RaterAverage, model_score: Option<f64>) -> Result<f64> {
    let model =
        model_score.ok_or_else(|| Error::UndefinedOperand("model metric is undefined".into()))?;
    Ok(human.mean - model)
}
