//! Play-by-play game logs: the canonical model, its file format, and consistency checks.

mod format;
mod model;
mod validate;

pub use format::{parse_game_log, read_game_log, serialize_game_log, write_game_log};
pub use model::{
    inning_label, parse_inning_label, EventKind, GameLog, GameOutcome, GameState, Half, Play,
};
pub use validate::{validate_log, ValidationIssue};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GameLogError {
    #[error("malformed record {index}: {detail}")]
    MalformedRecord { index: usize, detail: String },
    #[error("duplicate play id {id}")]
    DuplicatePlayId { id: i64 },
    #[error("game log contains no plays")]
    EmptyLog,
    #[error("unknown play id {0}")]
    UnknownPlayId(i64),
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Up to `n` plays immediately preceding `play_id`, oldest first.
pub fn context_window(log: &GameLog, play_id: i64, n: usize) -> Result<&[Play], GameLogError> {
    let position = log
        .position(play_id)
        .ok_or(GameLogError::UnknownPlayId(play_id))?;
    Ok(preceding(&log.plays, position, n))
}

pub(crate) fn preceding<T>(items: &[T], position: usize, n: usize) -> &[T] {
    &items[position.saturating_sub(n)..position]
}

pub const DEFAULT_CONTEXT_PLAYS: usize = 5;
