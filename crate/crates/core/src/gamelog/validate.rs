use std::fmt;

use serde::Serialize;

use super::model::{GameLog, Half};

/// A consistency finding. `index` is the zero-based position of the offending play.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    /// `state_before` of this play differs from `state_after` of the previous one.
    ChainBreak { index: usize },
    TimestampOrder { index: usize },
    /// Play ids must strictly increase in log order.
    IdOrder { index: usize },
    /// Outs went down within one half-inning.
    OutsRegression { index: usize },
    /// The fielding team's score moved, or the batting team's went down.
    ScoreRegression { index: usize },
    /// The terminal flag is missing from the last play or set on an earlier one.
    TerminalMarker { index: usize },
    FinalScoreMismatch { expected_diff: i32, terminal_diff: i32 },
    /// The log never leaves its opening state.
    NoProgress,
    InvalidState { index: usize },
}

impl ValidationIssue {
    pub fn is_chain_break(&self) -> bool {
        matches!(self, ValidationIssue::ChainBreak { .. })
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::ChainBreak { index } => {
                write!(f, "play {index}: state_before does not match previous state_after")
            }
            ValidationIssue::TimestampOrder { index } => {
                write!(f, "play {index}: timestamp goes backwards")
            }
            ValidationIssue::IdOrder { index } => write!(f, "play {index}: id not increasing"),
            ValidationIssue::OutsRegression { index } => {
                write!(f, "play {index}: outs decrease within a half-inning")
            }
            ValidationIssue::ScoreRegression { index } => {
                write!(f, "play {index}: score moves against the batting side")
            }
            ValidationIssue::TerminalMarker { index } => {
                write!(f, "play {index}: terminal flag misplaced")
            }
            ValidationIssue::FinalScoreMismatch {
                expected_diff,
                terminal_diff,
            } => write!(
                f,
                "final score difference {expected_diff} disagrees with terminal state {terminal_diff}"
            ),
            ValidationIssue::NoProgress => write!(f, "log never leaves its opening state"),
            ValidationIssue::InvalidState { index } => {
                write!(f, "play {index}: state out of range")
            }
        }
    }
}

/// Collects every consistency problem in a parsed log. Never fails.
pub fn validate_log(log: &GameLog) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    let last = log.plays.len().saturating_sub(1);

    for (index, play) in log.plays.iter().enumerate() {
        let before = play.state_before;
        let after = play.state_after;

        if !before.is_valid() || !after.is_valid() {
            issues.push(ValidationIssue::InvalidState { index });
        }

        if index > 0 {
            let prev = &log.plays[index - 1];
            if prev.state_after != before {
                issues.push(ValidationIssue::ChainBreak { index });
            }
            if play.timestamp_ms < prev.timestamp_ms {
                issues.push(ValidationIssue::TimestampOrder { index });
            }
            if play.id <= prev.id {
                issues.push(ValidationIssue::IdOrder { index });
            }
        }

        if before.same_half_inning(&after) {
            if after.outs < before.outs {
                issues.push(ValidationIssue::OutsRegression { index });
            }
            let regressed = match before.half {
                // away bats in the top: home minus away may only go down
                Half::Top => after.score_diff > before.score_diff,
                Half::Bottom => after.score_diff < before.score_diff,
            };
            if regressed {
                issues.push(ValidationIssue::ScoreRegression { index });
            }
        }

        if play.is_terminal != (index == last) {
            issues.push(ValidationIssue::TerminalMarker { index });
        }
    }

    if let (Some(first), Some(terminal)) = (log.plays.first(), log.plays.last()) {
        let expected_diff = log.final_home_score - log.final_away_score;
        if terminal.is_terminal && terminal.state_after.score_diff != expected_diff {
            issues.push(ValidationIssue::FinalScoreMismatch {
                expected_diff,
                terminal_diff: terminal.state_after.score_diff,
            });
        }
        if first.state_before == terminal.state_after {
            issues.push(ValidationIssue::NoProgress);
        }
    }

    issues
}
