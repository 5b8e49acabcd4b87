//! Error types shared across the crate.

use thiserror::Error;

/// Any failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument fell outside its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two records share a key that must be unique within a dataset.
    #[error("duplicate key: {0}")]
    DuplicateKey(String),

    /// A prediction references an (item, task) pair with no ground-truth votes.
    #[error("orphan prediction: no annotations for item `{item_id}`, task `{task_id}`")]
    OrphanPrediction { item_id: String, task_id: String },

    /// The dataset holds no annotations.
    #[error("empty dataset: no annotation records")]
    EmptyDataset,

    /// A scorecard was requested for a dataset with no predictions.
    #[error("no prediction records: nothing to score")]
    NoPredictions,

    /// A consensus was requested for an empty vote list.
    #[error("empty votes: at least one vote is required")]
    EmptyVotes,

    /// An agreement ratio fell outside the range covered by the bin scheme.
    #[error("out of range: agreement {0} is not above 1/2")]
    OutOfRange(String),

    /// A candidate lacks a prediction for an item in the evaluated stratum.
    #[error("missing prediction: system `{system_id}` has no answer for item `{item_id}`, task `{task_id}`")]
    MissingPrediction {
        system_id: String,
        item_id: String,
        task_id: String,
    },

    /// Metrics were requested for a stratum with no items.
    #[error("empty stratum: no items to score")]
    EmptyStratum,

    /// Every rater value fed into an average was undefined.
    #[error("all rater values are undefined")]
    AllUndefined,

    /// A delta was requested with an undefined operand.
    #[error("undefined operand: {0}")]
    UndefinedOperand(String),

    /// A statistical test needs more samples than were supplied.
    #[error("too few samples: {0}")]
    TooFewSamples(String),

    /// Paired samples differ in length.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// A delta collection matched nothing.
    #[error("empty sample: {0}")]
    EmptySample(String),

    /// An input file could not be parsed.
    #[error("parse error in {path} (record {record}): {message}")]
    Parse {
        path: String,
        record: u64,
        message: String,
    },

    /// An invalid configuration value.
    #[error("config error: {0}")]
    Config(String),

    /// Reports built under different bin schemes cannot be compared.
    #[error("mixed bin schemes: {0}")]
    MixedBinSchemes(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// CSV-level failure outside record parsing.
    #[error(transparent)]
    Csv(#[from] csv::Error),

    /// JSON (de)serialization failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
