mod common;

use std::collections::BTreeSet;

use baseball_highlights::gamelog::EventKind;
use baseball_highlights::reflection::{
    apply_preferences, emit_manifest, select_top_k, ClipOptions, KeyPlayers, LateInningBonus,
    PreferenceWarning, Preferences, PreferredPlay, ReflectionError, Theme,
};
use baseball_highlights::{GameLog, ScoredPlay};
use proptest::prelude::*;

fn neutral(scores: &[i64]) -> Vec<PreferredPlay> {
    scores
        .iter()
        .enumerate()
        .map(|(i, &s)| PreferredPlay::neutral(common::scored(i as i64 + 1, s)))
        .collect()
}

/// Sort by (score desc, position asc), take k, restore chronological order.
fn select_oracle(scores: &[i64], k: usize) -> Vec<i64> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by_key(|&i| (std::cmp::Reverse(scores[i]), i));
    let mut taken: Vec<usize> = idx.into_iter().take(k).collect();
    taken.sort();
    taken.into_iter().map(|i| i as i64 + 1).collect()
}

fn log_at(timestamps: &[u64]) -> GameLog {
    let plays = timestamps
        .iter()
        .enumerate()
        .map(|(i, &t)| common::bare_play(i as i64 + 1, t, 1 + i as u32 / 6, EventKind::Hit))
        .collect();
    common::bare_log("clips", plays)
}

fn clips_for(timestamps: &[u64], chosen: &[i64]) -> Vec<(u64, u64)> {
    let log = log_at(timestamps);
    let scored: Vec<PreferredPlay> = log
        .plays
        .iter()
        .map(|p| PreferredPlay::neutral(common::scored(p.id, if chosen.contains(&p.id) { 50 } else { 1 })))
        .collect();
    let mut selection = select_top_k("clips", &scored, chosen.len()).unwrap();
    let manifest = emit_manifest(&mut selection, &log, &ClipOptions::default()).unwrap();
    for (c, m) in selection.chosen.iter().zip(&manifest.clips) {
        assert_eq!((c.clip_start_ms, c.clip_end_ms), (m.clip_start_ms, m.clip_end_ms));
    }
    manifest.clips.iter().map(|c| (c.clip_start_ms, c.clip_end_ms)).collect()
}

fn game_and_scores() -> (GameLog, Vec<ScoredPlay>) {
    let mut log = common::heldout(3);
    for (i, play) in log.plays.iter_mut().enumerate() {
        if i % 4 == 0 {
            play.actor = Some("Star Player".into());
        }
    }
    let scored = log.plays.iter().enumerate().map(|(i, p)| common::scored(p.id, (i as i64 * 37) % 61)).collect();
    (log, scored)
}

#[test]
fn default_preferences_change_nothing() {
    let (log, scored) = game_and_scores();
    let (preferred, warnings) = apply_preferences(&scored, &log, &Preferences::default()).unwrap();
    assert!(warnings.is_empty());
    for (p, s) in preferred.iter().zip(&scored) {
        assert_eq!(p, &PreferredPlay::neutral(s.clone()));
    }
}

#[test]
fn late_inning_bonus_hits_only_the_named_innings() {
    let (log, scored) = game_and_scores();
    let prefs = Preferences {
        late_inning_bonus: LateInningBonus { innings: BTreeSet::from([8, 9]), points: 10 },
        ..Preferences::default()
    };
    let (preferred, _) = apply_preferences(&scored, &log, &prefs).unwrap();
    for (p, play) in preferred.iter().zip(&log.plays) {
        let expected = if matches!(play.state_before.inning, 8 | 9) { 10 } else { 0 };
        assert_eq!(p.preference_bonus, expected);
        assert_eq!(p.selection_score(), p.scored.final_score + expected);
        assert_eq!(p.scored.final_score, scored[log.position(play.id).unwrap()].final_score);
    }
}

#[test]
fn key_players_add_points_and_unknown_names_warn() {
    let (log, scored) = game_and_scores();
    let prefs = Preferences {
        key_players: KeyPlayers { names: BTreeSet::from(["Star Player".into(), "Ghost".into()]), points: 7 },
        ..Preferences::default()
    };
    let (preferred, warnings) = apply_preferences(&scored, &log, &prefs).unwrap();
    assert_eq!(warnings, [PreferenceWarning::UnknownPlayer("Ghost".into())]);
    for (i, p) in preferred.iter().enumerate() {
        assert_eq!(p.preference_bonus, if i % 4 == 0 { 7 } else { 0 });
    }
}

#[test]
fn theme_filters_without_rescoring() {
    let (log, scored) = game_and_scores();
    for theme in [Theme::Offense, Theme::Defense] {
        let prefs = Preferences { theme, k: 10, ..Preferences::default() };
        let (preferred, _) = apply_preferences(&scored, &log, &prefs).unwrap();
        for (p, play) in preferred.iter().zip(&log.plays) {
            let admitted = match theme {
                Theme::Offense => matches!(
                    play.event_kind,
                    EventKind::Hit | EventKind::HomeRun | EventKind::Walk | EventKind::Steal
                ),
                _ => matches!(play.event_kind, EventKind::Out | EventKind::Strikeout | EventKind::Error),
            };
            assert_eq!(p.eligible, admitted);
            assert_eq!(p.preference_bonus, 0);
        }
        let selection = select_top_k(&log.game_id, &preferred, 10).unwrap();
        let eligible_scores: Vec<i64> = preferred.iter().map(|p| if p.eligible { p.selection_score() } else { i64::MIN }).collect();
        let expected: BTreeSet<i64> = select_oracle(&eligible_scores, 10)
            .into_iter()
            .map(|pos| log.plays[pos as usize - 1].id)
            .collect();
        assert_eq!(selection.play_ids(), expected);
    }
}

#[test]
fn unknown_scored_play_is_rejected() {
    let (log, mut scored) = game_and_scores();
    scored.push(common::scored(9999, 1));
    assert!(matches!(apply_preferences(&scored, &log, &Preferences::default()), Err(ReflectionError::UnknownPlayId(9999))));
}

#[test]
fn ties_go_to_the_earlier_play() {
    let candidates = neutral(&[5, 9, 9, 1]);
    assert_eq!(select_top_k("g", &candidates, 1).unwrap().play_ids(), BTreeSet::from([2]));
    let two = select_top_k("g", &candidates, 2).unwrap();
    assert_eq!(two.chosen.iter().map(|c| c.play_id).collect::<Vec<_>>(), [2, 3]);
    let three = select_top_k("g", &candidates, 3).unwrap();
    assert_eq!(three.chosen.iter().map(|c| c.play_id).collect::<Vec<_>>(), [1, 2, 3]);
}

#[test]
fn k_beyond_the_game_selects_everything() {
    let candidates = neutral(&[3, 1, 2]);
    let selection = select_top_k("g", &candidates, 60).unwrap();
    assert_eq!((selection.k_requested, selection.k_effective), (60, 3));
    assert!(matches!(select_top_k("g", &candidates, 0), Err(ReflectionError::InvalidK)));
}

#[test]
fn clip_window_examples() {
    let ts = [0, 10_000, 12_000, 60_000, 61_000];
    assert_eq!(
        clips_for(&ts, &[1, 2, 3, 4, 5]),
        [(0, 5_000), (5_000, 10_000), (10_000, 32_000), (55_000, 60_000), (60_000, 81_000)]
    );
    assert_eq!(clips_for(&ts, &[1, 4]), [(0, 10_000), (55_000, 61_000)]);
    assert_eq!(clips_for(&ts, &[5]), [(56_000, 81_000)]);
    assert_eq!(clips_for(&[100_000, 100_000, 130_000], &[1, 2]), [(95_000, 100_000), (100_000, 120_000)]);
}

#[test]
fn selection_and_manifest_round_trip() {
    let (log, scored) = game_and_scores();
    let (preferred, _) = apply_preferences(&scored, &log, &Preferences { k: 12, ..Preferences::default() }).unwrap();
    let mut selection = select_top_k(&log.game_id, &preferred, 12).unwrap();
    emit_manifest(&mut selection, &log, &ClipOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("selection.json");
    std::fs::write(&path, selection.to_json()).unwrap();
    assert_eq!(baseball_highlights::reflection::HighlightSelection::read(&path).unwrap(), selection);

    let mut stray = selection.clone();
    stray.chosen[0].play_id = 9999;
    assert!(matches!(emit_manifest(&mut stray, &log, &ClipOptions::default()), Err(ReflectionError::UnknownPlayId(9999))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn selection_matches_sort_oracle(scores in prop::collection::vec(0i64..40, 1..80), k in 1usize..90) {
        let selection = select_top_k("g", &neutral(&scores), k).unwrap();
        let got: Vec<i64> = selection.chosen.iter().map(|c| c.play_id).collect();
        prop_assert_eq!(got, select_oracle(&scores, k));
        prop_assert_eq!(selection.k_effective, k.min(scores.len()));
    }

    #[test]
    fn clips_never_overlap(
        gaps in prop::collection::vec(0u64..40_000, 2..60),
        picks in prop::collection::vec(any::<bool>(), 60),
        pre in 0u64..15_000,
        post in 0u64..40_000,
    ) {
        let mut t = 1_000_000;
        let timestamps: Vec<u64> = gaps.iter().map(|g| { t += g; t }).collect();
        let log = log_at(&timestamps);
        let chosen: Vec<i64> = (1..=timestamps.len() as i64).filter(|&id| picks[id as usize - 1]).collect();
        prop_assume!(!chosen.is_empty());
        let scored: Vec<PreferredPlay> = log.plays.iter()
            .map(|p| PreferredPlay::neutral(common::scored(p.id, if chosen.contains(&p.id) { 9 } else { 0 })))
            .collect();
        let mut selection = select_top_k("clips", &scored, chosen.len()).unwrap();
        let opts = ClipOptions { pre_roll_ms: pre, post_roll_ms: post };
        let clips = emit_manifest(&mut selection, &log, &opts).unwrap().clips;
        for (i, a) in clips.iter().enumerate() {
            let play_t = log.play(a.play_id).unwrap().timestamp_ms;
            prop_assert!(a.clip_start_ms <= a.clip_end_ms);
            prop_assert!(a.clip_start_ms <= play_t);
            prop_assert!(a.clip_end_ms <= play_t + post);
            for b in &clips[i + 1..] {
                let overlap = a.clip_start_ms.max(b.clip_start_ms) < a.clip_end_ms.min(b.clip_end_ms);
                prop_assert!(!overlap, "{:?} {:?}", a, b);
            }
        }
    }

    #[test]
    fn raising_a_preference_only_adds_favoured_plays(low in 0u32..30, extra in 0u32..30, k in 1usize..40) {
        let (log, scored) = game_and_scores();
        let selected = |points: u32| {
            let prefs = Preferences {
                key_players: KeyPlayers { names: BTreeSet::from(["Star Player".into()]), points },
                k,
                ..Preferences::default()
            };
            let (preferred, _) = apply_preferences(&scored, &log, &prefs).unwrap();
            let favoured: BTreeSet<i64> = preferred.iter().filter(|p| p.preference_bonus > 0).map(|p| p.play_id()).collect();
            let ids = select_top_k(&log.game_id, &preferred, k).unwrap().play_ids();
            ids.into_iter().filter(|id| points == 0 || favoured.contains(id)).collect::<BTreeSet<i64>>()
        };
        let before = selected(low.max(1));
        let after = selected(low.max(1) + extra);
        prop_assert!(before.is_subset(&after));
    }
}
