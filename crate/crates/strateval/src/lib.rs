//! Agreement-stratified evaluation of binary classifiers when the
//! ground truth itself is uncertain.
//!
//! When several experts annotate the same items, their agreement rate
//! bounds what any candidate, model or fellow expert, can score
//! against the majority label. This crate provides the machinery to
//! take that into account:
//!
//! * [`prob`]: closed-form expected precision/recall/F1/accuracy for a
//!   labeler who matches the majority with probability `p_d` under
//!   positive-class ratio `m`, and binomial score-tail probabilities.
//! * [`stratify`]: per-item majority labels, observed agreement, and
//!   assignment of items into agreement bins.
//! * [`metrics`]: confusion counts and observed metrics per stratum,
//!   with undefined values kept explicit, plus multi-rater averaging.
//! * [`sim`]: a seeded Monte Carlo generator of synthetic annotator
//!   panels, comparing a distribution-following labeler to a random one.
//! * [`stats`]: Welch/paired t-tests, significance stars, and delta
//!   distribution summaries.
//! * [`report`]: stratified scorecards with evidence fields, highlight
//!   flags, cross-system deltas, and low-evidence warnings.
//!
//! The `strateval` binary exposes the same capabilities as the
//! `stratify`, `expect`, `tail`, `simulate`, and `compare` subcommands;
//! the `examples/` directory shows one runnable program per capability.
//!
//! # Quick tour
//!
//! ```
//! use strateval::{consensus, expected_metrics, score_tail_probability, Label, TailQuery};
//!
//! # fn main() -> strateval::Result<()> {
//! // Four of five annotators picked "positive": observed agreement 4/5.
//! let votes = [Label::Positive; 4].iter().chain(&[Label::Negative]).copied()
//!     .collect::<Vec<_>>();
//! let tally = consensus(&votes)?;
//! assert_eq!(tally.p_d_hat_f64(), 0.8);
//!
//! // What can one more such expert score against the majority?
//! let expected = expected_metrics(tally.p_d_hat_f64(), 0.3)?;
//! assert!((expected.recall - 0.8).abs() < 1e-12);
//!
//! // And how likely is 80%+ accuracy over 100 items at that agreement?
//! let tail = score_tail_probability(&TailQuery::new(100, 80, 0.8)?)?;
//! assert!(tail > 0.5 && tail < 0.6);
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod metrics;
pub mod prob;
pub mod report;
pub mod sim;
pub mod special;
pub mod stats;
pub mod stratify;

pub use dataset::{AnnotationRecord, Dataset, Label, LabelMapping, PredictionRecord};
pub use error::{Error, Result};
pub use metrics::{ConfusionCounts, Metric, MetricSet, RaterAverage};
pub use prob::{
    expected_confusion, expected_metrics, expected_score, score_tail_probability,
    AgreementProbability, ExpectedConfusion, ExpectedMetrics, TailQuery,
};
pub use report::{CompareReport, StratifiedReport};
pub use sim::{run_simulation, sweep, SimulationConfig, SimulationResult};
pub use stats::{collect_deltas, delta_summary, t_test, SignificanceResult, Stars};
pub use stratify::{assign_bin, consensus, stratify, BinScheme, Stratification, Stratum};
