//! Line-delimited JSON game log files.
//!
//! The first non-blank line is a header record; every following line is one
//! play. Prose innings ("Top of the 6th") are accepted on input and always
//! written back as a number plus a `half` field.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{parse_inning_label, EventKind, GameLog, GameState, Half, Play};
use super::GameLogError;

#[derive(Debug, Serialize, Deserialize)]
struct HeaderRecord {
    game_id: String,
    home_team: String,
    away_team: String,
    final_home_score: i32,
    final_away_score: i32,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum InningField {
    Number(u32),
    Text(String),
}

#[derive(Debug, Deserialize)]
struct RawPlay {
    id: Option<i64>,
    timestamp_ms: Option<u64>,
    result: Option<String>,
    actor: Option<String>,
    event_kind: Option<String>,
    inning: Option<InningField>,
    half: Option<Half>,
    outs_before: Option<u8>,
    runners_before: Option<u8>,
    score_diff_before: Option<i32>,
    outs_after: Option<u8>,
    runners_after: Option<u8>,
    score_diff_after: Option<i32>,
    inning_after: Option<InningField>,
    half_after: Option<Half>,
    is_terminal: Option<bool>,
}

#[derive(Debug, Serialize)]
struct CanonicalPlay<'a> {
    id: i64,
    timestamp_ms: u64,
    result: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    actor: Option<&'a str>,
    event_kind: EventKind,
    inning: u32,
    half: Half,
    outs_before: u8,
    runners_before: u8,
    score_diff_before: i32,
    outs_after: u8,
    runners_after: u8,
    score_diff_after: i32,
    inning_after: u32,
    half_after: Half,
    is_terminal: bool,
}

fn missing(index: usize, field: &str) -> GameLogError {
    GameLogError::MalformedRecord {
        index,
        detail: format!("missing field `{field}`"),
    }
}

fn malformed(index: usize, detail: impl Into<String>) -> GameLogError {
    GameLogError::MalformedRecord {
        index,
        detail: detail.into(),
    }
}

fn resolve_inning(
    index: usize,
    field: &str,
    inning: Option<InningField>,
    half: Option<Half>,
    half_field: &str,
) -> Result<(u32, Half), GameLogError> {
    match inning.ok_or_else(|| missing(index, field))? {
        InningField::Number(n) => {
            if n == 0 {
                return Err(malformed(index, format!("`{field}` must be at least 1")));
            }
            let half = half.ok_or_else(|| missing(index, half_field))?;
            Ok((n, half))
        }
        InningField::Text(text) => {
            let (parsed_half, n) = parse_inning_label(&text)
                .ok_or_else(|| malformed(index, format!("unrecognised inning `{text}`")))?;
            if let Some(explicit) = half {
                if explicit != parsed_half {
                    return Err(malformed(
                        index,
                        format!("`{half_field}` contradicts inning text `{text}`"),
                    ));
                }
            }
            Ok((n, parsed_half))
        }
    }
}

fn checked_state(
    index: usize,
    which: &str,
    inning: u32,
    half: Half,
    outs: u8,
    runners: u8,
    score_diff: i32,
) -> Result<GameState, GameLogError> {
    if outs > 2 {
        return Err(malformed(index, format!("outs_{which} must be 0..=2, got {outs}")));
    }
    if runners > 7 {
        return Err(malformed(
            index,
            format!("runners_{which} must be 0..=7, got {runners}"),
        ));
    }
    Ok(GameState::new(inning, half, outs, runners, score_diff))
}

fn play_from_raw(index: usize, raw: RawPlay) -> Result<Play, GameLogError> {
    let id = raw.id.ok_or_else(|| missing(index, "id"))?;
    let timestamp_ms = raw.timestamp_ms.ok_or_else(|| missing(index, "timestamp_ms"))?;
    let result = raw.result.ok_or_else(|| missing(index, "result"))?;
    let (inning, half) = resolve_inning(index, "inning", raw.inning, raw.half, "half")?;
    let (inning_after, half_after) =
        resolve_inning(index, "inning_after", raw.inning_after, raw.half_after, "half_after")?;
    let state_before = checked_state(
        index,
        "before",
        inning,
        half,
        raw.outs_before.ok_or_else(|| missing(index, "outs_before"))?,
        raw.runners_before.ok_or_else(|| missing(index, "runners_before"))?,
        raw.score_diff_before
            .ok_or_else(|| missing(index, "score_diff_before"))?,
    )?;
    let state_after = checked_state(
        index,
        "after",
        inning_after,
        half_after,
        raw.outs_after.ok_or_else(|| missing(index, "outs_after"))?,
        raw.runners_after.ok_or_else(|| missing(index, "runners_after"))?,
        raw.score_diff_after.ok_or_else(|| missing(index, "score_diff_after"))?,
    )?;
    let event_kind = match raw.event_kind.as_deref() {
        Some(name) => EventKind::parse_name(name),
        None => EventKind::from_result(&result),
    };
    let actor = raw.actor.filter(|a| !a.trim().is_empty());
    Ok(Play {
        id,
        timestamp_ms,
        result,
        actor,
        event_kind,
        state_before,
        state_after,
        is_terminal: raw.is_terminal.unwrap_or(false),
    })
}

/// Parses a game log document.
///
/// Record indices in errors count non-blank lines from 0 (the header).
pub fn parse_game_log(raw: &str) -> Result<GameLog, GameLogError> {
    let mut records = raw
        .lines()
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .enumerate();

    let (_, header_line) = records.next().ok_or(GameLogError::EmptyLog)?;
    let header: HeaderRecord =
        serde_json::from_str(header_line).map_err(|e| malformed(0, e.to_string()))?;

    let mut plays = Vec::new();
    let mut seen = HashSet::new();
    for (index, line) in records {
        let raw: RawPlay = serde_json::from_str(line).map_err(|e| malformed(index, e.to_string()))?;
        let play = play_from_raw(index, raw)?;
        if !seen.insert(play.id) {
            return Err(GameLogError::DuplicatePlayId { id: play.id });
        }
        plays.push(play);
    }
    if plays.is_empty() {
        return Err(GameLogError::EmptyLog);
    }

    Ok(GameLog {
        game_id: header.game_id,
        home_team: header.home_team,
        away_team: header.away_team,
        plays,
        final_home_score: header.final_home_score,
        final_away_score: header.final_away_score,
    })
}

/// Writes the canonical form: header line, then one line per play.
pub fn serialize_game_log(log: &GameLog) -> String {
    let header = HeaderRecord {
        game_id: log.game_id.clone(),
        home_team: log.home_team.clone(),
        away_team: log.away_team.clone(),
        final_home_score: log.final_home_score,
        final_away_score: log.final_away_score,
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for play in &log.plays {
        let record = CanonicalPlay {
            id: play.id,
            timestamp_ms: play.timestamp_ms,
            result: &play.result,
            actor: play.actor.as_deref(),
            event_kind: play.event_kind,
            inning: play.state_before.inning,
            half: play.state_before.half,
            outs_before: play.state_before.outs,
            runners_before: play.state_before.runner_state,
            score_diff_before: play.state_before.score_diff,
            outs_after: play.state_after.outs,
            runners_after: play.state_after.runner_state,
            score_diff_after: play.state_after.score_diff,
            inning_after: play.state_after.inning,
            half_after: play.state_after.half,
            is_terminal: play.is_terminal,
        };
        out.push_str(&serde_json::to_string(&record).expect("play serializes"));
        out.push('\n');
    }
    out
}

pub fn read_game_log(path: impl AsRef<Path>) -> Result<GameLog, GameLogError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| GameLogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_game_log(&text)
}

pub fn write_game_log(path: impl AsRef<Path>, log: &GameLog) -> Result<(), GameLogError> {
    let path = path.as_ref();
    fs::write(path, serialize_game_log(log)).map_err(|source| GameLogError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = r#"{"game_id":"g1","home_team":"LG","away_team":"Doosan","final_home_score":0,"final_away_score":1}"#;

    #[test]
    fn prose_inning_with_extra_fields() {
        let doc = format!(
            "{HEADER}\n{}\n",
            r#"{"id":35,"timestamp_ms":1000,"result":"Son Joo-in: Single to left field","inning":"Top of the 6th","WPA":-0.052,"outs_before":1,"runners_before":0,"score_diff_before":0,"outs_after":1,"runners_after":1,"score_diff_after":0,"inning_after":"Top of the 6th","is_terminal":true}"#
        );
        let log = parse_game_log(&doc).unwrap();
        let play = &log.plays[0];
        assert_eq!(play.state_before.half, Half::Top);
        assert_eq!(play.state_before.inning, 6);
        assert_eq!(play.event_kind, EventKind::Hit);
        assert_eq!(play.actor, None);
    }

    #[test]
    fn missing_field_names_record_and_field() {
        let doc = format!(
            "{HEADER}\n{}\n",
            r#"{"id":1,"timestamp_ms":0,"result":"x","inning":1,"half":"top","runners_before":0,"score_diff_before":0,"outs_after":0,"runners_after":0,"score_diff_after":0,"inning_after":1,"half_after":"top"}"#
        );
        match parse_game_log(&doc) {
            Err(GameLogError::MalformedRecord { index, detail }) => {
                assert_eq!(index, 1);
                assert!(detail.contains("outs_before"), "{detail}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_type_is_malformed() {
        let doc = format!(
            "{HEADER}\n{}\n",
            r#"{"id":"one","timestamp_ms":0,"result":"x"}"#
        );
        assert!(matches!(
            parse_game_log(&doc),
            Err(GameLogError::MalformedRecord { index: 1, .. })
        ));
    }

    #[test]
    fn out_of_range_state() {
        let doc = format!(
            "{HEADER}\n{}\n",
            r#"{"id":1,"timestamp_ms":0,"result":"x","inning":1,"half":"top","outs_before":3,"runners_before":0,"score_diff_before":0,"outs_after":0,"runners_after":0,"score_diff_after":0,"inning_after":1,"half_after":"top"}"#
        );
        assert!(matches!(
            parse_game_log(&doc),
            Err(GameLogError::MalformedRecord { index: 1, .. })
        ));
    }

    #[test]
    fn empty_documents() {
        assert!(matches!(parse_game_log(""), Err(GameLogError::EmptyLog)));
        assert!(matches!(parse_game_log("\n\n"), Err(GameLogError::EmptyLog)));
        assert!(matches!(parse_game_log(HEADER), Err(GameLogError::EmptyLog)));
    }

    #[test]
    fn contradictory_half() {
        let doc = format!(
            "{HEADER}\n{}\n",
            r#"{"id":1,"timestamp_ms":0,"result":"x","inning":"Top of the 2nd","half":"bottom","outs_before":0,"runners_before":0,"score_diff_before":0,"outs_after":0,"runners_after":0,"score_diff_after":0,"inning_after":2,"half_after":"top"}"#
        );
        assert!(matches!(
            parse_game_log(&doc),
            Err(GameLogError::MalformedRecord { index: 1, .. })
        ));
    }
}
