//! Canonical in-memory data model for annotations and predictions, plus
//! dataset-level validation.
//!
//! An [`AnnotationRecord`] is one vote by one annotator on one
//! (item, task) pair; a [`PredictionRecord`] is one candidate system's
//! answer for that pair. A [`Dataset`] holds both collections and is
//! immutable after load, so it can be shared freely across threads.

pub mod io;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary label. Anything that is not one of the two categories is a
/// parse error, never a third class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn flipped(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }

    /// Canonical textual form used when writing files.
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Negative => "0",
            Label::Positive => "1",
        }
    }
}

/// Declares which raw strings map to which binary label.
///
/// Input files in the wild use `{0,1}`, `{no,yes}`, `{negative,positive}`
/// and similar; the mapping is explicit so a file with an unexpected
/// vocabulary fails loudly instead of mis-parsing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelMapping {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
}

impl Default for LabelMapping {
    fn default() -> Self {
        let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        Self {
            positive: owned(&["1", "yes", "positive", "true"]),
            negative: owned(&["0", "no", "negative", "false"]),
        }
    }
}

impl LabelMapping {
    pub fn parse(&self, raw: &str) -> Option<Label> {
        let lowered = raw.trim().to_ascii_lowercase();
        if self
            .positive
            .iter()
            .any(|p| p.eq_ignore_ascii_case(&lowered))
        {
            Some(Label::Positive)
        } else if self
            .negative
            .iter()
            .any(|n| n.eq_ignore_ascii_case(&lowered))
        {
            Some(Label::Negative)
        } else {
            None
        }
    }
}

/// One vote by one annotator on one (item, task) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub item_id: String,
    pub task_id: String,
    pub annotator_id: String,
    pub label: Label,
}

/// One candidate system's answer for one (item, task) pair. The system
/// may be a model or a held-out human rater; the data model does not
/// distinguish them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub item_id: String,
    pub task_id: String,
    pub system_id: String,
    pub label: Label,
}

/// Per-task annotator panel size range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PanelRange {
    pub min: usize,
    pub max: usize,
}

/// Counts produced by [`Dataset::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub items: usize,
    pub tasks: usize,
    pub annotators: usize,
    pub systems: usize,
    /// Observed panel size range per task.
    pub panel_sizes: BTreeMap<String, PanelRange>,
    /// Predictions whose (item, task) has no ground-truth votes.
    pub orphan_predictions: usize,
    /// Items whose vote count differs from the task's modal panel size.
    pub variable_panel_items: usize,
}

/// Immutable collection of annotations and predictions.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Dataset {
    pub annotations: Vec<AnnotationRecord>,
    pub predictions: Vec<PredictionRecord>,
}

impl Dataset {
    pub fn new(annotations: Vec<AnnotationRecord>, predictions: Vec<PredictionRecord>) -> Self {
        Self {
            annotations,
            predictions,
        }
    }

    /// Check key uniqueness and cross-collection consistency.
    ///
    /// Fails hard on duplicate (item, task, annotator) or
    /// (item, task, system) keys and on an empty annotation set; softer
    /// issues (orphan predictions, variable panel sizes) are counted in
    /// the summary. Validation is pure: the dataset is never mutated.
    pub fn validate(&self) -> Result<ValidationSummary> {
        if self.annotations.is_empty() {
            return Err(Error::EmptyDataset);
        }

        let mut vote_keys = BTreeSet::new();
        let mut items = BTreeSet::new();
        let mut tasks = BTreeSet::new();
        let mut annotators = BTreeSet::new();
        let mut votes_per_item: BTreeMap<(&str, &str), usize> = BTreeMap::new();
        for a in &self.annotations {
            let key = (
                a.item_id.as_str(),
                a.task_id.as_str(),
                a.annotator_id.as_str(),
            );
            if !vote_keys.insert(key) {
                return Err(Error::DuplicateKey(format!(
                    "annotation ({}, {}, {})",
                    a.item_id, a.task_id, a.annotator_id
                )));
            }
            items.insert(a.item_id.as_str());
            tasks.insert(a.task_id.as_str());
            annotators.insert(a.annotator_id.as_str());
            *votes_per_item
                .entry((a.task_id.as_str(), a.item_id.as_str()))
                .or_default() += 1;
        }

        let mut pred_keys = BTreeSet::new();
        let mut systems = BTreeSet::new();
        let mut orphans = 0usize;
        for p in &self.predictions {
            let key = (p.item_id.as_str(), p.task_id.as_str(), p.system_id.as_str());
            if !pred_keys.insert(key) {
                return Err(Error::DuplicateKey(format!(
                    "prediction ({}, {}, {})",
                    p.item_id, p.task_id, p.system_id
                )));
            }
            systems.insert(p.system_id.as_str());
            if !votes_per_item.contains_key(&(p.task_id.as_str(), p.item_id.as_str())) {
                orphans += 1;
            }
        }

        // Panel size per task: the modal vote count, with outliers flagged.
        let mut panel_sizes = BTreeMap::new();
        let mut variable_panel_items = 0usize;
        for task in &tasks {
            let counts: Vec<usize> = votes_per_item
                .iter()
                .filter(|((t, _), _)| t == task)
                .map(|(_, n)| *n)
                .collect();
            let min = counts.iter().copied().min().unwrap_or(0);
            let max = counts.iter().copied().max().unwrap_or(0);
            panel_sizes.insert(task.to_string(), PanelRange { min, max });
            if min != max {
                let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
                for n in &counts {
                    *histogram.entry(*n).or_default() += 1;
                }
                let modal = histogram
                    .iter()
                    .max_by_key(|(_, c)| **c)
                    .map(|(n, _)| *n)
                    .unwrap_or(0);
                variable_panel_items += counts.iter().filter(|n| **n != modal).count();
            }
        }

        Ok(ValidationSummary {
            items: items.len(),
            tasks: tasks.len(),
            annotators: annotators.len(),
            systems: systems.len(),
            panel_sizes,
            orphan_predictions: orphans,
            variable_panel_items,
        })
    }

    /// All task ids present in the annotations, sorted.
    pub fn task_ids(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .annotations
            .iter()
            .map(|a| a.task_id.as_str())
            .collect();
        set.into_iter().map(String::from).collect()
    }

    /// All system ids present in the predictions, sorted.
    pub fn system_ids(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .predictions
            .iter()
            .map(|p| p.system_id.as_str())
            .collect();
        set.into_iter().map(String::from).collect()
    }

    /// Votes grouped per (task, item), sorted keys for deterministic walks.
    pub fn votes_by_item(&self) -> BTreeMap<(String, String), Vec<Label>> {
        let mut map: BTreeMap<(String, String), Vec<Label>> = BTreeMap::new();
        for a in &self.annotations {
            map.entry((a.task_id.clone(), a.item_id.clone()))
                .or_default()
                .push(a.label);
        }
        map
    }

    /// Lookup table of one system's predictions on one task.
    pub fn predictions_for(&self, task_id: &str, system_id: &str) -> BTreeMap<&str, Label> {
        self.predictions
            .iter()
            .filter(|p| p.task_id == task_id && p.system_id == system_id)
            .map(|p| (p.item_id.as_str(), p.label))
            .collect()
    }

    /// Derive a pseudo-rater by drawing one ground-truth vote uniformly
    /// per (item, task). Useful when no held-out human answers exist:
    /// the drawn vote behaves like one more expert sampled from the
    /// panel's distribution. Deterministic for a given seed.
    pub fn pseudo_rater(&self, system_id: &str, seed: u64) -> Vec<PredictionRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.votes_by_item()
            .iter()
            .map(|((task_id, item_id), votes)| PredictionRecord {
                item_id: item_id.clone(),
                task_id: task_id.clone(),
                system_id: system_id.to_string(),
                label: *votes
                    .choose(&mut rng)
                    .expect("votes_by_item gives non-empty vectors"),
            })
            .collect()
    }
}
