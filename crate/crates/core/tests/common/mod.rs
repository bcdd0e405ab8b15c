#![allow(dead_code)]

use std::path::PathBuf;

use baseball_highlights::gamelog::{read_game_log, EventKind};
use baseball_highlights::sabermetrics::AnnotatedPlay;
use baseball_highlights::scoring::ScoredPlay;
use baseball_highlights::{GameLog, GameState, Half, Play, WETable};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn corpus20() -> Vec<GameLog> {
    (0..20)
        .map(|i| read_game_log(fixture(&format!("corpus/game-{i:03}.jsonl"))).unwrap())
        .collect()
}

pub fn heldout(i: usize) -> GameLog {
    read_game_log(fixture(&format!("heldout/heldout-{i:03}.jsonl"))).unwrap()
}

pub fn reference_table() -> WETable {
    WETable::read(fixture("we_table.json")).unwrap()
}

/// A play whose state does not change; only id, time, inning and kind matter.
pub fn bare_play(id: i64, timestamp_ms: u64, inning: u32, kind: EventKind) -> Play {
    let state = GameState::new(inning, Half::Top, 0, 0, 0);
    Play {
        id,
        timestamp_ms,
        result: format!("play {id}"),
        actor: Some(format!("Player {}", id % 7)),
        event_kind: kind,
        state_before: state,
        state_after: state,
        is_terminal: false,
    }
}

/// A log of state-neutral plays; only useful where chaining does not matter.
pub fn bare_log(game_id: &str, plays: Vec<Play>) -> GameLog {
    GameLog {
        game_id: game_id.to_string(),
        home_team: "Home".into(),
        away_team: "Away".into(),
        plays,
        final_home_score: 0,
        final_away_score: 0,
    }
}

pub fn annotated(play: Play, wpa: f64, li: f64) -> AnnotatedPlay {
    AnnotatedPlay {
        play,
        we_before: 0.5,
        we_after: 0.5 + wpa,
        wpa,
        li,
    }
}

pub fn scored(play_id: i64, final_score: i64) -> ScoredPlay {
    ScoredPlay {
        play_id,
        wpa: 0.0,
        li: 0.0,
        base_score: final_score,
        llm_adjustment: 0,
        li_bonus: 0,
        final_score,
        wpa_analysis: String::new(),
        clamped: false,
    }
}
