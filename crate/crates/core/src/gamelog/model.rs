use std::fmt;

use serde::{Deserialize, Serialize};

/// Which half of an inning is being played. The away team bats in the top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    Top,
    Bottom,
}

impl Half {
    pub fn as_str(self) -> &'static str {
        match self {
            Half::Top => "top",
            Half::Bottom => "bottom",
        }
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Snapshot of the game situation between two plays.
///
/// `runner_state` is a three bit occupancy mask: bit 0 is first base,
/// bit 1 second, bit 2 third. `score_diff` is home minus away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameState {
    pub inning: u32,
    pub half: Half,
    pub outs: u8,
    pub runner_state: u8,
    pub score_diff: i32,
}

impl GameState {
    /// State at the first pitch of a game.
    pub const INITIAL: GameState = GameState {
        inning: 1,
        half: Half::Top,
        outs: 0,
        runner_state: 0,
        score_diff: 0,
    };

    pub fn new(inning: u32, half: Half, outs: u8, runner_state: u8, score_diff: i32) -> Self {
        GameState {
            inning,
            half,
            outs,
            runner_state,
            score_diff,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.inning >= 1 && self.outs <= 2 && self.runner_state <= 7
    }

    pub fn same_half_inning(&self, other: &GameState) -> bool {
        self.inning == other.inning && self.half == other.half
    }

    /// Prose label such as "Top of the 6th".
    pub fn inning_label(&self) -> String {
        inning_label(self.half, self.inning)
    }
}

pub fn inning_label(half: Half, inning: u32) -> String {
    let half = match half {
        Half::Top => "Top",
        Half::Bottom => "Bottom",
    };
    format!("{half} of the {}", ordinal(inning))
}

fn ordinal(n: u32) -> String {
    let suffix = match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

/// Parses prose innings ("Top of the 6th", "bottom 9", "T6") into half and number.
pub fn parse_inning_label(text: &str) -> Option<(Half, u32)> {
    let lower = text.trim().to_ascii_lowercase();
    let (half, rest) = if let Some(rest) = lower.strip_prefix("top") {
        (Half::Top, rest)
    } else if let Some(rest) = lower.strip_prefix("bottom") {
        (Half::Bottom, rest)
    } else if let Some(rest) = lower.strip_prefix("bot") {
        (Half::Bottom, rest)
    } else if let Some(rest) = lower.strip_prefix('t') {
        (Half::Top, rest)
    } else if let Some(rest) = lower.strip_prefix('b') {
        (Half::Bottom, rest)
    } else {
        return None;
    };
    let rest = rest.trim_start();
    let rest = rest.strip_prefix("of the").unwrap_or(rest).trim_start();
    let rest = rest.strip_prefix("of").unwrap_or(rest).trim_start();
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return None;
    }
    let tail = rest[digits.len()..].trim();
    if !matches!(tail, "" | "st" | "nd" | "rd" | "th") {
        return None;
    }
    let inning: u32 = digits.parse().ok()?;
    (inning >= 1).then_some((half, inning))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Hit,
    HomeRun,
    Walk,
    Strikeout,
    Out,
    Error,
    Steal,
    Substitution,
    Other,
}

impl EventKind {
    /// Keyword table, first match wins. Longer phrases come before the
    /// words they contain ("double play" before "double", "strikeout" before "out").
    const KEYWORDS: &'static [(&'static str, EventKind)] = &[
        ("home run", EventKind::HomeRun),
        ("homer", EventKind::HomeRun),
        ("grand slam", EventKind::HomeRun),
        ("substitution", EventKind::Substitution),
        ("pinch", EventKind::Substitution),
        ("replaces", EventKind::Substitution),
        ("replaced", EventKind::Substitution),
        ("pitching change", EventKind::Substitution),
        ("strikeout", EventKind::Strikeout),
        ("struck out", EventKind::Strikeout),
        ("strikes out", EventKind::Strikeout),
        ("stolen base", EventKind::Steal),
        ("steals", EventKind::Steal),
        ("steal", EventKind::Steal),
        ("error", EventKind::Error),
        ("intentional walk", EventKind::Walk),
        ("walk", EventKind::Walk),
        ("base on balls", EventKind::Walk),
        ("hit by pitch", EventKind::Walk),
        ("double play", EventKind::Out),
        ("sacrifice", EventKind::Out),
        ("single", EventKind::Hit),
        ("double", EventKind::Hit),
        ("triple", EventKind::Hit),
        ("flyout", EventKind::Out),
        ("groundout", EventKind::Out),
        ("lineout", EventKind::Out),
        ("popout", EventKind::Out),
        ("pop out", EventKind::Out),
        ("fielder's choice", EventKind::Out),
        ("caught stealing", EventKind::Out),
        ("out", EventKind::Out),
    ];

    pub fn from_result(result: &str) -> EventKind {
        let lower = result.to_lowercase();
        // "caught stealing" must not be read as a steal.
        if lower.contains("caught stealing") {
            return EventKind::Out;
        }
        Self::KEYWORDS
            .iter()
            .find(|(kw, _)| lower.contains(kw))
            .map(|&(_, kind)| kind)
            .unwrap_or(EventKind::Other)
    }

    pub fn parse_name(name: &str) -> EventKind {
        match name.trim().to_ascii_lowercase().replace(['-', ' '], "_").as_str() {
            "hit" => EventKind::Hit,
            "home_run" | "homerun" => EventKind::HomeRun,
            "walk" => EventKind::Walk,
            "strikeout" => EventKind::Strikeout,
            "out" => EventKind::Out,
            "error" => EventKind::Error,
            "steal" => EventKind::Steal,
            "substitution" => EventKind::Substitution,
            _ => EventKind::Other,
        }
    }

    pub fn is_offense(self) -> bool {
        matches!(
            self,
            EventKind::Hit | EventKind::HomeRun | EventKind::Walk | EventKind::Steal
        )
    }

    pub fn is_defense(self) -> bool {
        matches!(self, EventKind::Out | EventKind::Strikeout | EventKind::Error)
    }
}

/// One annotated event of a game.
#[derive(Debug, Clone, PartialEq)]
pub struct Play {
    pub id: i64,
    pub timestamp_ms: u64,
    pub result: String,
    pub actor: Option<String>,
    pub event_kind: EventKind,
    pub state_before: GameState,
    pub state_after: GameState,
    pub is_terminal: bool,
}

impl Play {
    pub fn changes_state(&self) -> bool {
        self.state_before != self.state_after
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameOutcome {
    HomeWin,
    AwayWin,
    Tie,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameLog {
    pub game_id: String,
    pub home_team: String,
    pub away_team: String,
    pub plays: Vec<Play>,
    pub final_home_score: i32,
    pub final_away_score: i32,
}

impl GameLog {
    pub fn outcome(&self) -> GameOutcome {
        use std::cmp::Ordering::*;
        match self.final_home_score.cmp(&self.final_away_score) {
            Greater => GameOutcome::HomeWin,
            Less => GameOutcome::AwayWin,
            Equal => GameOutcome::Tie,
        }
    }

    pub fn position(&self, play_id: i64) -> Option<usize> {
        self.plays.iter().position(|p| p.id == play_id)
    }

    pub fn play(&self, play_id: i64) -> Option<&Play> {
        self.plays.iter().find(|p| p.id == play_id)
    }

    pub fn terminal(&self) -> Option<&Play> {
        self.plays.last().filter(|p| p.is_terminal)
    }

    pub fn is_complete(&self) -> bool {
        self.terminal().is_some()
    }

    /// Distinct actors appearing in the log.
    pub fn roster(&self) -> std::collections::BTreeSet<&str> {
        self.plays.iter().filter_map(|p| p.actor.as_deref()).collect()
    }
}
