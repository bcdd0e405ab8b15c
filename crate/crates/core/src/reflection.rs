//! Reflection stage: viewer preferences, top-K selection, clip manifest.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamelog::{EventKind, GameLog};
use crate::scoring::ScoredPlay;

pub const DEFAULT_K: usize = 60;
pub const DEFAULT_PRE_ROLL_MS: u64 = 5_000;
pub const DEFAULT_POST_ROLL_MS: u64 = 20_000;

#[derive(Debug, Error)]
pub enum ReflectionError {
    #[error("unknown play id {0}")]
    UnknownPlayId(i64),
    #[error("k must be at least 1")]
    InvalidK,
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theme {
    #[default]
    Any,
    Offense,
    Defense,
}

impl Theme {
    pub fn admits(self, kind: EventKind) -> bool {
        match self {
            Theme::Any => true,
            Theme::Offense => kind.is_offense(),
            Theme::Defense => kind.is_defense(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LateInningBonus {
    pub innings: BTreeSet<u32>,
    pub points: u32,
}

impl Default for LateInningBonus {
    fn default() -> Self {
        LateInningBonus {
            innings: BTreeSet::from([8, 9]),
            points: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KeyPlayers {
    pub names: BTreeSet<String>,
    pub points: u32,
}

/// Viewer preferences. Bonuses are additive points; a theme only filters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Preferences {
    pub late_inning_bonus: LateInningBonus,
    pub key_players: KeyPlayers,
    pub theme: Theme,
    pub k: usize,
}

impl Default for Preferences {
    fn default() -> Self {
        Preferences {
            late_inning_bonus: LateInningBonus::default(),
            key_players: KeyPlayers::default(),
            theme: Theme::Any,
            k: DEFAULT_K,
        }
    }
}

/// A scored play after preferences. The ledger is kept untouched beside the
/// preference delta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferredPlay {
    pub scored: ScoredPlay,
    pub preference_bonus: i64,
    pub eligible: bool,
}

impl PreferredPlay {
    /// No bonus, eligible.
    pub fn neutral(scored: ScoredPlay) -> Self {
        PreferredPlay {
            scored,
            preference_bonus: 0,
            eligible: true,
        }
    }

    pub fn play_id(&self) -> i64 {
        self.scored.play_id
    }

    pub fn selection_score(&self) -> i64 {
        self.scored.final_score + self.preference_bonus
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PreferenceWarning {
    /// A key player named in preferences never appears in the log.
    UnknownPlayer(String),
}

/// Applies preference bonuses and the theme filter. Output follows input order.
pub fn apply_preferences(
    scored: &[ScoredPlay],
    log: &GameLog,
    prefs: &Preferences,
) -> Result<(Vec<PreferredPlay>, Vec<PreferenceWarning>), ReflectionError> {
    let roster = log.roster();
    let warnings = prefs
        .key_players
        .names
        .iter()
        .filter(|name| !roster.contains(name.as_str()))
        .map(|name| PreferenceWarning::UnknownPlayer(name.clone()))
        .collect();

    let preferred = scored
        .iter()
        .map(|s| {
            let play = log.play(s.play_id).ok_or(ReflectionError::UnknownPlayId(s.play_id))?;
            let mut bonus = 0i64;
            if prefs.late_inning_bonus.innings.contains(&play.state_before.inning) {
                bonus += i64::from(prefs.late_inning_bonus.points);
            }
            if play
                .actor
                .as_ref()
                .is_some_and(|a| prefs.key_players.names.contains(a))
            {
                bonus += i64::from(prefs.key_players.points);
            }
            Ok(PreferredPlay {
                scored: s.clone(),
                preference_bonus: bonus,
                eligible: prefs.theme.admits(play.event_kind),
            })
        })
        .collect::<Result<Vec<_>, ReflectionError>>()?;
    Ok((preferred, warnings))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChosenPlay {
    pub play_id: i64,
    pub final_score: i64,
    pub clip_start_ms: u64,
    pub clip_end_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HighlightSelection {
    pub game_id: String,
    /// Chronological. Clip bounds are zero until [`emit_manifest`] fills them.
    pub chosen: Vec<ChosenPlay>,
    pub k_requested: usize,
    pub k_effective: usize,
}

impl HighlightSelection {
    pub fn play_ids(&self) -> BTreeSet<i64> {
        self.chosen.iter().map(|c| c.play_id).collect()
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("selection serializes");
        out.push('\n');
        out
    }

    pub fn read(path: impl AsRef<Path>) -> Result<HighlightSelection, ReflectionError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ReflectionError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| ReflectionError::Malformed(e.to_string()))
    }
}

/// Picks the `k` best eligible candidates by selection score (earlier play
/// wins ties) and returns them in input order, which is chronological.
pub fn select_top_k(
    game_id: &str,
    candidates: &[PreferredPlay],
    k: usize,
) -> Result<HighlightSelection, ReflectionError> {
    if k == 0 {
        return Err(ReflectionError::InvalidK);
    }
    let mut eligible: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].eligible)
        .collect();
    eligible.sort_by(|&a, &b| {
        candidates[b]
            .selection_score()
            .cmp(&candidates[a].selection_score())
            .then(a.cmp(&b))
    });
    eligible.truncate(k);
    eligible.sort_unstable();
    let chosen: Vec<ChosenPlay> = eligible
        .into_iter()
        .map(|i| ChosenPlay {
            play_id: candidates[i].play_id(),
            final_score: candidates[i].selection_score(),
            clip_start_ms: 0,
            clip_end_ms: 0,
        })
        .collect();
    Ok(HighlightSelection {
        game_id: game_id.to_string(),
        k_effective: chosen.len(),
        k_requested: k,
        chosen,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClipOptions {
    pub pre_roll_ms: u64,
    pub post_roll_ms: u64,
}

impl Default for ClipOptions {
    fn default() -> Self {
        ClipOptions {
            pre_roll_ms: DEFAULT_PRE_ROLL_MS,
            post_roll_ms: DEFAULT_POST_ROLL_MS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clip {
    pub play_id: i64,
    pub clip_start_ms: u64,
    pub clip_end_ms: u64,
    pub result: String,
    pub final_score: i64,
}

/// Clip list for external video tooling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub game_id: String,
    pub clips: Vec<Clip>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("manifest serializes");
        out.push('\n');
        out
    }
}

/// Computes clip windows, writes them into `selection` and returns the manifest.
///
/// A clip runs from `pre_roll` before its play to `post_roll` after it, but
/// stops at the next logged play. A clip never starts before the previous
/// chosen play's timestamp, and is trimmed to end where the next chosen clip
/// starts.
pub fn emit_manifest(
    selection: &mut HighlightSelection,
    log: &GameLog,
    opts: &ClipOptions,
) -> Result<Manifest, ReflectionError> {
    let positions = selection
        .chosen
        .iter()
        .map(|c| log.position(c.play_id).ok_or(ReflectionError::UnknownPlayId(c.play_id)))
        .collect::<Result<Vec<usize>, _>>()?;

    let mut starts = Vec::with_capacity(positions.len());
    let mut ends = Vec::with_capacity(positions.len());
    for (i, &pos) in positions.iter().enumerate() {
        let t = log.plays[pos].timestamp_ms;
        let mut start = t.saturating_sub(opts.pre_roll_ms);
        if i > 0 {
            let prev_t = log.plays[positions[i - 1]].timestamp_ms;
            let prev_start: u64 = starts[i - 1];
            let floor = if t > prev_t {
                prev_t.max(prev_start + 1)
            } else {
                prev_t
            };
            start = start.max(floor);
        }
        let end = match log.plays.get(pos + 1) {
            Some(next) => next.timestamp_ms.min(t + opts.post_roll_ms),
            None => t + opts.post_roll_ms,
        };
        starts.push(start);
        ends.push(end);
    }
    for i in 0..ends.len() {
        if let Some(&next_start) = starts.get(i + 1) {
            ends[i] = ends[i].min(next_start);
        }
        ends[i] = ends[i].max(starts[i]);
    }

    let mut clips = Vec::with_capacity(positions.len());
    for (i, (chosen, &pos)) in selection.chosen.iter_mut().zip(&positions).enumerate() {
        chosen.clip_start_ms = starts[i];
        chosen.clip_end_ms = ends[i];
        clips.push(Clip {
            play_id: chosen.play_id,
            clip_start_ms: starts[i],
            clip_end_ms: ends[i],
            result: log.plays[pos].result.clone(),
            final_score: chosen.final_score,
        });
    }
    Ok(Manifest {
        game_id: selection.game_id.clone(),
        clips,
    })
}
