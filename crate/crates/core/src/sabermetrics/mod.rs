//! Win expectancy tables and per-play WPA / leverage annotation.
//!
//! Win expectancy is always the home team's. Terminal plays resolve to 1.0,
//! 0.0 (or 0.5 for a tie) from the final score instead of a table entry.
//! States missing from the table fall back to the nearest score difference in
//! the same inning, half, outs and runners, then to 0.5; both are counted.

mod annotate;
mod table;

pub use annotate::{annotate_game, compute_li, compute_wpa, AnnotatedPlay, AnnotationRecord};
pub use table::{
    build_we_table, count_states, LookupSource, StateCounts, StateKey, TableMetadata, WETable,
    DEFAULT_MAX_INNING_BUCKET, NEUTRAL_WE, SCORE_DIFF_CLAMP,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SabermetricsError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("game {0} has no terminal play")]
    IncompleteGame(String),
    #[error("max inning bucket must be at least 1")]
    InvalidInningBucket,
    #[error("average |ΔWE| is zero; leverage is undefined")]
    ZeroDenominator,
    #[error("state chain broken at play {index}")]
    ChainBreak { index: usize },
    #[error("corrupt win expectancy table: {0}")]
    CorruptTable(String),
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
