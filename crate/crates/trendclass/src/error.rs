//! Crate-wide error type.

use crate::corpus::TrendLabel;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid tweet: {0}")]
    InvalidTweet(String),

    #[error("trend {0:?} has no tweets")]
    EmptyTrend(String),

    #[error("empty sequence has no mean")]
    EmptyMean,

    #[error("unknown label {0:?} (expected news, ongoing_event, meme, or commemorative)")]
    UnknownLabel(String),

    #[error("line {line}: {message}")]
    CorpusLine { line: usize, message: String },

    #[error("duplicate topic {0:?}")]
    DuplicateTopic(String),

    #[error("population counts must be positive")]
    NonPositiveCount,

    #[error("degenerate training set: {0}")]
    DegenerateTraining(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("class {0} absent from training data")]
    MissingClass(TrendLabel),

    #[error("unsupported model version {got} (this build reads version {expected})")]
    ModelVersion { expected: u32, got: u32 },

    #[error("corrupt model file: {0}")]
    CorruptModel(String),

    #[error(
        "train size {train_size} must be at least 1 and smaller than the corpus size {corpus_size}"
    )]
    InvalidSplit {
        train_size: usize,
        corpus_size: usize,
    },

    #[error("ratings row {row} sums to {got}, expected {expected} raters")]
    RowSum { row: usize, expected: u64, got: u64 },

    #[error("chance agreement is 1 while observed agreement is not; kappa is undefined")]
    DegenerateAgreement,

    #[error("trend {0:?} has no label")]
    UnlabeledTrend(String),

    #[error("profile for {class}: {field}: {message}")]
    InvalidProfile {
        class: TrendLabel,
        field: &'static str,
        message: String,
    },

    #[error("committee needs at least one margin report")]
    EmptyCommittee,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
