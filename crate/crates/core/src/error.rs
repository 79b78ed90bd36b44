use thiserror::Error;

use crate::intersection::CorrelatorKey;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unstable correlator: genus {genus} with {points} marked points")]
    UnstableKey { genus: u32, points: usize },

    #[error("negative exponent in correlator")]
    NegativeExponent,

    #[error("reduction not applicable: {0}")]
    NotApplicable(String),

    #[error("no table entry for {0}; rebuild the Hodge table (`hforge hodge --rebuild`)")]
    MissingTableEntry(CorrelatorKey),

    #[error("search exceeded node budget of {budget}")]
    SearchTooLarge { budget: u64 },

    #[error("linear system is rank deficient (rank {rank} of {unknowns} unknowns)")]
    RankDeficient { rank: usize, unknowns: usize },

    #[error("linear system is inconsistent at row {row}")]
    Inconsistent { row: usize },

    #[error("holdout probe {probe} failed: ELSV gives {elsv}, oracle gives {oracle}")]
    HoldoutFailed {
        probe: String,
        elsv: String,
        oracle: String,
    },

    #[error("cache line {line}: {message}: `{record}`")]
    Cache {
        line: usize,
        message: String,
        record: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
