//! Majority labels, observed agreement, and agreement bins.
//!
//! The observed agreement of an item is the fraction of its votes that
//! went to the majority label. It is kept as an exact rational so that
//! bin edges like 7/10 and 9/10 classify 3/5 and 4/5 panels without any
//! float-edge surprises. An adjudicated tie-break vote is treated as
//! one more expert opinion, never as an oracle.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label, PanelRange};
use crate::error::{Error, Result};

/// Label of the synthetic bin that aggregates every non-tied item.
pub const ALL_BIN: &str = "All";

/// Outcome of a majority vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Majority {
    Label(Label),
    Tied,
}

/// Per-item majority tally. The observed agreement
/// `votes_for_majority / total_votes` exceeds 1/2 exactly when the
/// majority is not tied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemConsensus {
    pub majority: Majority,
    pub votes_for_majority: u32,
    pub total_votes: u32,
}

impl ItemConsensus {
    /// Observed agreement as an exact rational.
    pub fn p_d_hat(&self) -> Ratio<u64> {
        Ratio::new(self.votes_for_majority as u64, self.total_votes as u64)
    }

    pub fn p_d_hat_f64(&self) -> f64 {
        self.votes_for_majority as f64 / self.total_votes as f64
    }
}

/// Tally a vote list into its majority label and observed agreement.
pub fn consensus(votes: &[Label]) -> Result<ItemConsensus> {
    if votes.is_empty() {
        return Err(Error::EmptyVotes);
    }
    let positives = votes.iter().filter(|v| **v == Label::Positive).count() as u32;
    let total = votes.len() as u32;
    let negatives = total - positives;
    let (majority, winner_votes) = match positives.cmp(&negatives) {
        std::cmp::Ordering::Greater => (Majority::Label(Label::Positive), positives),
        std::cmp::Ordering::Less => (Majority::Label(Label::Negative), negatives),
        std::cmp::Ordering::Equal => (Majority::Tied, positives),
    };
    Ok(ItemConsensus {
        majority,
        votes_for_majority: winner_votes,
        total_votes: total,
    })
}

/// One agreement bin: a half-open interval ending at `upper`, except the
/// last bin which closes at 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub label: String,
    /// Exclusive upper edge (inclusive for the final bin).
    pub upper: Ratio<u64>,
    /// Agreement value used when quoting expected metrics for this bin.
    pub nominal_p_d: f64,
}

/// Ordered agreement bins covering (1/2, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinScheme {
    bins: Vec<Bin>,
}

/// Parse a plain decimal string ("0.7", "1", "0.85") into an exact ratio.
pub fn parse_decimal_ratio(text: &str) -> Result<Ratio<u64>> {
    let bad = || Error::Config(format!("`{text}` is not a plain decimal in [0, 1]"));
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let scale = 10u64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
    let int_value: u64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let frac_value: u64 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().map_err(|_| bad())?
    };
    let numer = int_value
        .checked_mul(scale)
        .and_then(|v| v.checked_add(frac_value))
        .ok_or_else(bad)?;
    if numer > scale {
        return Err(bad());
    }
    Ok(Ratio::new(numer, scale))
}

impl BinScheme {
    /// Build a scheme from ordered bins; uppers must strictly increase,
    /// stay above 1/2, and end exactly at 1.
    pub fn new(bins: Vec<Bin>) -> Result<Self> {
        if bins.is_empty() {
            return Err(Error::Config("bin scheme needs at least one bin".into()));
        }
        let half = Ratio::new(1u64, 2u64);
        let one = Ratio::new(1u64, 1u64);
        let mut previous = half;
        let mut labels = BTreeSet::new();
        for bin in &bins {
            if bin.label.is_empty() || bin.label == ALL_BIN {
                return Err(Error::Config(format!("invalid bin label `{}`", bin.label)));
            }
            if !labels.insert(bin.label.clone()) {
                return Err(Error::Config(format!(
                    "duplicate bin label `{}`",
                    bin.label
                )));
            }
            if bin.upper <= previous {
                return Err(Error::Config(format!(
                    "bin `{}` upper edge must exceed the previous edge",
                    bin.label
                )));
            }
            previous = bin.upper;
        }
        if previous != one {
            return Err(Error::Config("final bin edge must be exactly 1".into()));
        }
        Ok(Self { bins })
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    pub fn labels(&self) -> Vec<&str> {
        self.bins.iter().map(|b| b.label.as_str()).collect()
    }

    /// Label of the highest-agreement bin.
    pub fn top_label(&self) -> &str {
        &self.bins[self.bins.len() - 1].label
    }

    /// Label of the lowest-agreement bin.
    pub fn bottom_label(&self) -> &str {
        &self.bins[0].label
    }

    pub fn nominal_p_d(&self, label: &str) -> Option<f64> {
        self.bins
            .iter()
            .find(|b| b.label == label)
            .map(|b| b.nominal_p_d)
    }

    /// A short text identity used to refuse cross-scheme comparisons.
    pub fn fingerprint(&self) -> String {
        self.bins
            .iter()
            .map(|b| format!("{}@{}/{}", b.label, b.upper.numer(), b.upper.denom()))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl Default for BinScheme {
    /// Edges 7/10 and 9/10 reproduce both the five-annotator grid
    /// {3/5, 4/5, 5/5} and adjudicated 2/3 panels: 3/5 and 2/3 fall in
    /// "0.6", 4/5 in "0.8", unanimity in "1.0". The top bin quotes
    /// expected metrics at 0.985 rather than 1.0 so that precision and
    /// F1 stay informative as agreement approaches certainty.
    fn default() -> Self {
        Self::new(vec![
            Bin {
                label: "0.6".into(),
                upper: Ratio::new(7, 10),
                nominal_p_d: 0.6,
            },
            Bin {
                label: "0.8".into(),
                upper: Ratio::new(9, 10),
                nominal_p_d: 0.8,
            },
            Bin {
                label: "1.0".into(),
                upper: Ratio::new(1, 1),
                nominal_p_d: 0.985,
            },
        ])
        .expect("default scheme is well formed")
    }
}

/// Deterministically place an observed agreement in its bin.
pub fn assign_bin(p_d_hat: Ratio<u64>, scheme: &BinScheme) -> Result<&str> {
    let half = Ratio::new(1u64, 2u64);
    let one = Ratio::new(1u64, 1u64);
    if p_d_hat <= half || p_d_hat > one {
        return Err(Error::OutOfRange(format!(
            "{}/{}",
            p_d_hat.numer(),
            p_d_hat.denom()
        )));
    }
    for bin in &scheme.bins {
        if p_d_hat < bin.upper {
            return Ok(&bin.label);
        }
    }
    // p_d_hat == 1: the final bin is closed above.
    Ok(scheme.top_label())
}

/// The items of one (task, bin) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    pub task_id: String,
    pub bin_label: String,
    pub item_ids: BTreeSet<String>,
    /// Items whose majority label is positive.
    pub positives: usize,
}

impl Stratum {
    /// Sample size S.
    pub fn sample_size(&self) -> usize {
        self.item_ids.len()
    }

    /// Positive-class ratio m under majority labels.
    pub fn positive_ratio(&self) -> Option<f64> {
        let s = self.sample_size();
        (s > 0).then(|| self.positives as f64 / s as f64)
    }
}

/// Stratification output for a single task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskStrata {
    pub task_id: String,
    pub panel: PanelRange,
    /// Per-bin strata in scheme order (empty bins omitted), then "All".
    pub strata: Vec<Stratum>,
    /// Items with no strict majority; excluded from every stratum.
    pub tied_items: BTreeSet<String>,
    /// Majority tally per item id.
    pub consensus: BTreeMap<String, ItemConsensus>,
}

impl TaskStrata {
    pub fn stratum(&self, bin_label: &str) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.bin_label == bin_label)
    }
}

/// Full stratification of a dataset, one entry per task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratification {
    pub tasks: BTreeMap<String, TaskStrata>,
}

/// Group every task's items into agreement bins.
///
/// Each task is processed independently: tally votes per item, place
/// non-tied items in their bin and in "All", and collect tied items
/// separately. The walk order is deterministic, so identical inputs
/// give identical outputs regardless of scheduling.
pub fn stratify(dataset: &Dataset, scheme: &BinScheme) -> Result<Stratification> {
    let summary = dataset.validate()?;
    let votes = dataset.votes_by_item();

    let mut tasks: BTreeMap<String, TaskStrata> = BTreeMap::new();
    for ((task_id, item_id), item_votes) in &votes {
        let tally = consensus(item_votes)?;
        let entry = tasks.entry(task_id.clone()).or_insert_with(|| TaskStrata {
            task_id: task_id.clone(),
            panel: summary.panel_sizes[task_id],
            strata: Vec::new(),
            tied_items: BTreeSet::new(),
            consensus: BTreeMap::new(),
        });
        entry.consensus.insert(item_id.clone(), tally);
        if tally.majority == Majority::Tied {
            entry.tied_items.insert(item_id.clone());
        }
    }

    for strata in tasks.values_mut() {
        let mut by_bin: BTreeMap<&str, (BTreeSet<String>, usize)> = BTreeMap::new();
        let mut all_items = BTreeSet::new();
        let mut all_positives = 0usize;
        for (item_id, tally) in &strata.consensus {
            let label = match tally.majority {
                Majority::Tied => continue,
                Majority::Label(l) => l,
            };
            let bin = assign_bin(tally.p_d_hat(), scheme)?;
            let slot = by_bin.entry(bin).or_default();
            slot.0.insert(item_id.clone());
            if label == Label::Positive {
                slot.1 += 1;
                all_positives += 1;
            }
            all_items.insert(item_id.clone());
        }
        let mut ordered = Vec::new();
        for bin in scheme.bins() {
            if let Some((item_ids, positives)) = by_bin.remove(bin.label.as_str()) {
                ordered.push(Stratum {
                    task_id: strata.task_id.clone(),
                    bin_label: bin.label.clone(),
                    item_ids,
                    positives,
                });
            }
        }
        ordered.push(Stratum {
            task_id: strata.task_id.clone(),
            bin_label: ALL_BIN.to_string(),
            item_ids: all_items,
            positives: all_positives,
        });
        strata.strata = ordered;
    }

    Ok(Stratification { tasks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::AnnotationRecord;
    use proptest::prelude::*;

    use Label::{Negative as N, Positive as P};

    #[test]
    fn consensus_worked_examples() {
        let c = consensus(&[P, P, P, P, N]).unwrap();
        assert_eq!(c.majority, Majority::Label(P));
        assert_eq!((c.votes_for_majority, c.total_votes), (4, 5));
        assert_eq!(c.p_d_hat(), Ratio::new(4, 5));

        let unanimity = consensus(&[P, P]).unwrap();
        assert_eq!(unanimity.p_d_hat(), Ratio::new(1, 1));

        assert_eq!(consensus(&[P, N]).unwrap().majority, Majority::Tied);

        // Adjudicated third vote is just one more opinion: 2/3.
        let adjudicated = consensus(&[P, N, P]).unwrap();
        assert_eq!(adjudicated.majority, Majority::Label(P));
        assert_eq!(adjudicated.p_d_hat(), Ratio::new(2, 3));

        assert!(matches!(consensus(&[]), Err(Error::EmptyVotes)));
    }

    #[test]
    fn default_bins_place_observed_grids() {
        let scheme = BinScheme::default();
        assert_eq!(assign_bin(Ratio::new(3, 5), &scheme).unwrap(), "0.6");
        assert_eq!(assign_bin(Ratio::new(2, 3), &scheme).unwrap(), "0.6");
        assert_eq!(assign_bin(Ratio::new(4, 5), &scheme).unwrap(), "0.8");
        assert_eq!(assign_bin(Ratio::new(9, 10), &scheme).unwrap(), "1.0");
        assert_eq!(assign_bin(Ratio::new(1, 1), &scheme).unwrap(), "1.0");
        assert!(assign_bin(Ratio::new(1, 2), &scheme).is_err());
    }

    #[test]
    fn decimal_ratio_parsing() {
        assert_eq!(parse_decimal_ratio("0.7").unwrap(), Ratio::new(7, 10));
        assert_eq!(parse_decimal_ratio("0.85").unwrap(), Ratio::new(17, 20));
        assert_eq!(parse_decimal_ratio("1").unwrap(), Ratio::new(1, 1));
        assert_eq!(parse_decimal_ratio("1.0").unwrap(), Ratio::new(1, 1));
        assert!(parse_decimal_ratio("1.5").is_err());
        assert!(parse_decimal_ratio("-0.2").is_err());
        assert!(parse_decimal_ratio("abc").is_err());
    }

    #[test]
    fn scheme_rejects_malformed_edges() {
        assert!(BinScheme::new(vec![]).is_err());
        assert!(BinScheme::new(vec![Bin {
            label: "x".into(),
            upper: Ratio::new(9, 10),
            nominal_p_d: 0.9,
        }])
        .is_err());
        assert!(BinScheme::new(vec![
            Bin {
                label: "a".into(),
                upper: Ratio::new(9, 10),
                nominal_p_d: 0.8
            },
            Bin {
                label: "a".into(),
                upper: Ratio::new(1, 1),
                nominal_p_d: 1.0
            },
        ])
        .is_err());
    }

    fn panel_dataset(votes: &[(&str, &[Label])]) -> Dataset {
        let mut annotations = Vec::new();
        for (item, labels) in votes {
            for (i, label) in labels.iter().enumerate() {
                annotations.push(AnnotationRecord {
                    item_id: item.to_string(),
                    task_id: "t".into(),
                    annotator_id: format!("a{i}"),
                    label: *label,
                });
            }
        }
        Dataset::new(annotations, vec![])
    }

    #[test]
    fn stratify_counts_bins_and_ties() {
        let ds = panel_dataset(&[
            ("i0", &[P, P, P, N, N]), // 3/5 -> 0.6, positive
            ("i1", &[N, N, N, N, P]), // 4/5 -> 0.8, negative
            ("i2", &[P, P, P, P, P]), // 5/5 -> 1.0, positive
            ("i3", &[P, P, N, N]),    // tied
        ]);
        let strat = stratify(&ds, &BinScheme::default()).unwrap();
        let task = &strat.tasks["t"];
        assert_eq!(task.tied_items.len(), 1);
        let all = task.stratum(ALL_BIN).unwrap();
        assert_eq!(all.sample_size(), 3);
        assert_eq!(all.positives, 2);
        assert_eq!(task.stratum("0.6").unwrap().sample_size(), 1);
        assert_eq!(task.stratum("0.8").unwrap().sample_size(), 1);
        assert_eq!(task.stratum("1.0").unwrap().sample_size(), 1);

        // Sum of per-bin sizes equals the All size; ties stay outside.
        let per_bin: usize = task
            .strata
            .iter()
            .filter(|s| s.bin_label != ALL_BIN)
            .map(|s| s.sample_size())
            .sum();
        assert_eq!(per_bin, all.sample_size());
    }

    #[test]
    fn stratify_single_unanimous_item() {
        let ds = panel_dataset(&[("only", &[P, P, P])]);
        let strat = stratify(&ds, &BinScheme::default()).unwrap();
        let task = &strat.tasks["t"];
        assert_eq!(task.strata.len(), 2); // "1.0" and "All"
        let bin = task.stratum("1.0").unwrap();
        assert_eq!(bin.sample_size(), 1);
        assert_eq!(bin.positive_ratio(), Some(1.0));
    }

    #[test]
    fn stratify_brute_force_recount() {
        // 1000 items with a known vote-pattern cycle; recount by hand.
        let patterns: [&[Label]; 4] = [
            &[P, P, P, N, N],
            &[P, P, P, P, N],
            &[N, N, N, N, N],
            &[N, N, N, P, P],
        ];
        let specs: Vec<(String, &[Label])> = (0..1000)
            .map(|i| (format!("i{i:04}"), patterns[i % 4]))
            .collect();
        let borrowed: Vec<(&str, &[Label])> =
            specs.iter().map(|(id, v)| (id.as_str(), *v)).collect();
        let ds = panel_dataset(&borrowed);
        let strat = stratify(&ds, &BinScheme::default()).unwrap();
        let task = &strat.tasks["t"];
        // Pattern cycle: 250 each of 3/5+, 4/5+, 5/5-, 3/5-.
        assert_eq!(task.stratum("0.6").unwrap().sample_size(), 500);
        assert_eq!(task.stratum("0.6").unwrap().positives, 250);
        assert_eq!(task.stratum("0.8").unwrap().sample_size(), 250);
        assert_eq!(task.stratum("1.0").unwrap().sample_size(), 250);
        assert_eq!(task.stratum("1.0").unwrap().positives, 0);
        assert_eq!(task.stratum(ALL_BIN).unwrap().sample_size(), 1000);
    }

    proptest! {
        #[test]
        fn consensus_ignores_vote_order(mut votes in proptest::collection::vec(
            prop_oneof![Just(P), Just(N)], 1..12)) {
            let before = consensus(&votes).unwrap();
            votes.reverse();
            let after = consensus(&votes).unwrap();
            prop_assert_eq!(before, after);
        }

        #[test]
        fn odd_panels_never_tie(votes in proptest::collection::vec(
            prop_oneof![Just(P), Just(N)], 1..12).prop_filter("odd", |v| v.len() % 2 == 1)) {
            let tally = consensus(&votes).unwrap();
            prop_assert!(tally.majority != Majority::Tied);
            prop_assert!(tally.p_d_hat() > Ratio::new(1, 2));
        }

        #[test]
        fn relabeling_annotators_preserves_strata(seed in 0u64..1000) {
            // Annotator ids only route votes; renaming them must not
            // change any stratum.
            let patterns: [&[Label]; 3] = [&[P, P, N], &[P, N, N], &[P, P, P]];
            let pick = |i: u64| patterns[((seed + i) % 3) as usize];
            let mut original = Vec::new();
            let mut renamed = Vec::new();
            for i in 0..30u64 {
                for (j, label) in pick(i).iter().enumerate() {
                    original.push(AnnotationRecord {
                        item_id: format!("i{i}"),
                        task_id: "t".into(),
                        annotator_id: format!("a{j}"),
                        label: *label,
                    });
                    renamed.push(AnnotationRecord {
                        item_id: format!("i{i}"),
                        task_id: "t".into(),
                        annotator_id: format!("rater-{}", 9 - j),
                        label: *label,
                    });
                }
            }
            let scheme = BinScheme::default();
            let a = stratify(&Dataset::new(original, vec![]), &scheme).unwrap();
            let b = stratify(&Dataset::new(renamed, vec![]), &scheme).unwrap();
            prop_assert_eq!(a.tasks["t"].strata.clone(), b.tasks["t"].strata.clone());
        }
    }
}
