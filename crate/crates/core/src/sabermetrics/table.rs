use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::ops::Bound;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use super::SabermetricsError;
use crate::gamelog::{GameLog, GameOutcome, GameState, Half};

pub const DEFAULT_MAX_INNING_BUCKET: u32 = 9;
pub const SCORE_DIFF_CLAMP: i32 = 10;
pub const NEUTRAL_WE: f64 = 0.5;

/// Win expectancies are snapped to multiples of 2^-52. Every difference of two
/// such values in [0, 1] is exact, and so is every chronological partial sum
/// of per-play differences, which keeps per-game WPA sums telescoping exactly.
const WE_GRID: f64 = 4_503_599_627_370_496.0; // 2^52

fn quantize(probability: f64) -> f64 {
    (probability * WE_GRID).round() / WE_GRID
}

/// Table key: a game state with extra innings and lopsided scores bucketed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateKey {
    pub inning_bucket: u32,
    pub half: Half,
    pub outs: u8,
    pub runner_state: u8,
    pub score_diff_bucket: i32,
}

impl StateKey {
    pub fn from_state(state: &GameState, max_inning_bucket: u32) -> StateKey {
        StateKey {
            inning_bucket: state.inning.clamp(1, max_inning_bucket.max(1)),
            half: state.half,
            outs: state.outs,
            runner_state: state.runner_state,
            score_diff_bucket: state.score_diff.clamp(-SCORE_DIFF_CLAMP, SCORE_DIFF_CLAMP),
        }
    }

    fn with_diff(self, score_diff_bucket: i32) -> StateKey {
        StateKey {
            score_diff_bucket,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCounts {
    pub wins: u64,
    pub total: u64,
}

impl StateCounts {
    pub fn win_expectancy(&self) -> f64 {
        quantize(self.wins as f64 / self.total as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub corpus_size: usize,
    pub built_at: Option<String>,
    pub max_inning_bucket: u32,
}

/// Where a win expectancy came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LookupSource {
    Terminal,
    Table,
    /// Nearest score difference within the same inning, half, outs and runners.
    NearestScore(StateKey),
    Neutral,
}

/// Historical win-expectancy table, home-team perspective.
#[derive(Debug)]
pub struct WETable {
    entries: BTreeMap<StateKey, StateCounts>,
    avg_abs_dwe: f64,
    metadata: TableMetadata,
    misses: AtomicU64,
    neutral_fallbacks: AtomicU64,
}

impl Clone for WETable {
    fn clone(&self) -> Self {
        WETable {
            entries: self.entries.clone(),
            avg_abs_dwe: self.avg_abs_dwe,
            metadata: self.metadata.clone(),
            misses: AtomicU64::new(self.misses()),
            neutral_fallbacks: AtomicU64::new(self.neutral_fallbacks()),
        }
    }
}

/// Equality over table content; lookup counters are ignored.
impl PartialEq for WETable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
            && self.avg_abs_dwe.to_bits() == other.avg_abs_dwe.to_bits()
            && self.metadata == other.metadata
    }
}

impl WETable {
    /// Assembles a table from raw counts. `avg_abs_dwe` is taken as given.
    pub fn from_parts(
        entries: BTreeMap<StateKey, StateCounts>,
        avg_abs_dwe: f64,
        metadata: TableMetadata,
    ) -> Result<WETable, SabermetricsError> {
        for (key, counts) in &entries {
            if counts.total == 0 || counts.wins > counts.total {
                return Err(SabermetricsError::CorruptTable(format!(
                    "entry {key:?} has wins={} total={}",
                    counts.wins, counts.total
                )));
            }
        }
        if !(avg_abs_dwe.is_finite() && avg_abs_dwe >= 0.0) {
            return Err(SabermetricsError::CorruptTable(format!(
                "avg_abs_dwe must be finite and non-negative, got {avg_abs_dwe}"
            )));
        }
        Ok(WETable {
            entries,
            avg_abs_dwe,
            metadata,
            misses: AtomicU64::new(0),
            neutral_fallbacks: AtomicU64::new(0),
        })
    }

    pub fn entries(&self) -> &BTreeMap<StateKey, StateCounts> {
        &self.entries
    }

    pub fn avg_abs_dwe(&self) -> f64 {
        self.avg_abs_dwe
    }

    pub fn metadata(&self) -> &TableMetadata {
        &self.metadata
    }

    pub fn set_built_at(&mut self, built_at: Option<String>) {
        self.metadata.built_at = built_at;
    }

    pub fn key(&self, state: &GameState) -> StateKey {
        StateKey::from_state(state, self.metadata.max_inning_bucket)
    }

    pub fn counts(&self, state: &GameState) -> Option<StateCounts> {
        self.entries.get(&self.key(state)).copied()
    }

    /// Lookups that missed the table (nearest-score and neutral fallbacks).
    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    /// Misses that found no neighbour and returned 0.5.
    pub fn neutral_fallbacks(&self) -> u64 {
        self.neutral_fallbacks.load(Ordering::Relaxed)
    }

    pub fn reset_counters(&self) {
        self.misses.store(0, Ordering::Relaxed);
        self.neutral_fallbacks.store(0, Ordering::Relaxed);
    }

    /// Home win expectancy for a state. A terminal outcome overrides the table.
    pub fn lookup_we(&self, state: &GameState, terminal: Option<GameOutcome>) -> f64 {
        self.lookup_detailed(state, terminal).0
    }

    pub fn lookup_detailed(
        &self,
        state: &GameState,
        terminal: Option<GameOutcome>,
    ) -> (f64, LookupSource) {
        if let Some(outcome) = terminal {
            let we = match outcome {
                GameOutcome::HomeWin => 1.0,
                GameOutcome::AwayWin => 0.0,
                GameOutcome::Tie => NEUTRAL_WE,
            };
            return (we, LookupSource::Terminal);
        }
        let key = self.key(state);
        if let Some(counts) = self.entries.get(&key) {
            return (counts.win_expectancy(), LookupSource::Table);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        match self.nearest_score(key) {
            Some((found, counts)) => (counts.win_expectancy(), LookupSource::NearestScore(found)),
            None => {
                self.neutral_fallbacks.fetch_add(1, Ordering::Relaxed);
                (NEUTRAL_WE, LookupSource::Neutral)
            }
        }
    }

    /// Closest score bucket in the same situation; equal distances prefer the lower diff.
    fn nearest_score(&self, key: StateKey) -> Option<(StateKey, StateCounts)> {
        let below = self
            .entries
            .range((
                Bound::Included(key.with_diff(-SCORE_DIFF_CLAMP)),
                Bound::Excluded(key),
            ))
            .next_back();
        let above = self
            .entries
            .range((
                Bound::Excluded(key),
                Bound::Included(key.with_diff(SCORE_DIFF_CLAMP)),
            ))
            .next();
        let pick = match (below, above) {
            (Some(b), Some(a)) => {
                let db = key.score_diff_bucket - b.0.score_diff_bucket;
                let da = a.0.score_diff_bucket - key.score_diff_bucket;
                if db <= da {
                    b
                } else {
                    a
                }
            }
            (Some(b), None) => b,
            (None, Some(a)) => a,
            (None, None) => return None,
        };
        Some((*pick.0, *pick.1))
    }

    pub fn to_json(&self) -> String {
        let avg = RawValue::from_string(format!("{:.16e}", self.avg_abs_dwe))
            .expect("scientific notation is valid JSON");
        let document = TableDocumentOut {
            metadata: &self.metadata,
            avg_abs_dwe: avg,
            entries: self
                .entries
                .iter()
                .map(|(key, counts)| EntryRecord {
                    key: *key,
                    wins: counts.wins,
                    total: counts.total,
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&document).expect("table serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<WETable, SabermetricsError> {
        let document: TableDocumentIn = serde_json::from_str(text)
            .map_err(|e| SabermetricsError::CorruptTable(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for record in document.entries {
            let counts = StateCounts {
                wins: record.wins,
                total: record.total,
            };
            if entries.insert(record.key, counts).is_some() {
                return Err(SabermetricsError::CorruptTable(format!(
                    "duplicate entry {:?}",
                    record.key
                )));
            }
        }
        WETable::from_parts(entries, document.avg_abs_dwe, document.metadata)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), SabermetricsError> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|source| SabermetricsError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<WETable, SabermetricsError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| SabermetricsError::Io {
            path: path.display().to_string(),
            source,
        })?;
        WETable::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    #[serde(flatten)]
    key: StateKey,
    wins: u64,
    total: u64,
}

#[derive(Serialize)]
struct TableDocumentOut<'a> {
    metadata: &'a TableMetadata,
    avg_abs_dwe: Box<RawValue>,
    entries: Vec<EntryRecord>,
}

#[derive(Deserialize)]
struct TableDocumentIn {
    metadata: TableMetadata,
    avg_abs_dwe: f64,
    entries: Vec<EntryRecord>,
}

/// Counts, for every state key, the games passing through it and how many of
/// those the home team won. A game contributes at most once per key.
pub fn count_states(
    corpus: &[GameLog],
    max_inning_bucket: u32,
) -> Result<BTreeMap<StateKey, StateCounts>, SabermetricsError> {
    if corpus.is_empty() {
        return Err(SabermetricsError::EmptyCorpus);
    }
    let mut entries: BTreeMap<StateKey, StateCounts> = BTreeMap::new();
    for game in corpus {
        if !game.is_complete() {
            return Err(SabermetricsError::IncompleteGame(game.game_id.clone()));
        }
        let home_won = game.outcome() == GameOutcome::HomeWin;
        let visited: BTreeSet<StateKey> = game
            .plays
            .iter()
            .map(|p| StateKey::from_state(&p.state_before, max_inning_bucket))
            .collect();
        for key in visited {
            let counts = entries.entry(key).or_insert(StateCounts { wins: 0, total: 0 });
            counts.total += 1;
            counts.wins += u64::from(home_won);
        }
    }
    Ok(entries)
}

/// Builds the table, then measures the corpus-mean |ΔWE| with the finished table.
pub fn build_we_table(
    corpus: &[GameLog],
    max_inning_bucket: u32,
) -> Result<WETable, SabermetricsError> {
    if max_inning_bucket == 0 {
        return Err(SabermetricsError::InvalidInningBucket);
    }
    let entries = count_states(corpus, max_inning_bucket)?;
    let metadata = TableMetadata {
        corpus_size: corpus.len(),
        built_at: None,
        max_inning_bucket,
    };
    let mut table = WETable::from_parts(entries, 0.0, metadata)?;

    let mut swing_sum = 0.0;
    let mut plays = 0usize;
    for game in corpus {
        for step in super::annotate::we_chain(&table, game) {
            swing_sum += super::compute_wpa(step.0, step.1).abs();
            plays += 1;
        }
    }
    table.avg_abs_dwe = if plays == 0 {
        0.0
    } else {
        swing_sum / plays as f64
    };
    table.reset_counters();
    Ok(table)
}
