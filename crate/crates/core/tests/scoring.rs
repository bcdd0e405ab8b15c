mod common;

use std::time::Instant;

use baseball_highlights::gamelog::EventKind;
use baseball_highlights::llm::{LLMRequestConfig, LlmContext, MockBackend, PromptLibrary};
use baseball_highlights::sabermetrics::AnnotatedPlay;
use baseball_highlights::scoring::{
    bonus_for_position, decide, li_rank_correction, rank_plays, scored_report, ScoringError,
};
use baseball_highlights::ScoredPlay;
use proptest::prelude::*;

fn decide_mock(annotated: &[AnnotatedPlay]) -> Result<Vec<ScoredPlay>, ScoringError> {
    let prompts = PromptLibrary::bundled();
    let config = LLMRequestConfig::default();
    decide(&LlmContext::new(&MockBackend, &prompts, &config), annotated)
}

fn plays(rows: &[(u32, f64, f64)]) -> Vec<AnnotatedPlay> {
    rows.iter()
        .enumerate()
        .map(|(i, &(inning, wpa, li))| {
            let id = i as i64 + 1;
            common::annotated(common::bare_play(id, id as u64 * 30_000, inning, EventKind::Hit), wpa, li)
        })
        .collect()
}

/// 1-based rank by counting everything that sorts ahead.
fn rank_oracle(keys: &[f64], i: usize) -> usize {
    1 + (0..keys.len())
        .filter(|&j| keys[j] > keys[i] || (keys[j] == keys[i] && j < i))
        .count()
}

#[test]
fn ten_play_ledger_matches_hand_computation() {
    let annotated = plays(&[
        (1, 0.02, 0.3),
        (2, -0.08, 0.9),
        (3, 0.25, 2.0),
        (5, 0.01, 1.5),
        (6, -0.16, 1.7),
        (7, 0.03, 0.2),
        (7, 0.12, 1.2),
        (8, -0.40, 3.5),
        (9, 0.049, 2.5),
        (9, 0.0, 0.0),
    ]);
    let scored = decide_mock(&annotated).unwrap();
    let got: Vec<(i64, i64, i64, i64)> = scored
        .iter()
        .map(|s| (s.base_score, s.llm_adjustment, s.li_bonus, s.final_score))
        .collect();
    assert_eq!(
        got,
        [
            (10, 2, 0, 12),
            (29, 2, 0, 31),
            (50, 10, 0, 60),
            (10, 2, 20, 32),
            (50, 10, 0, 60),
            (15, 10, 0, 25),
            (34, 10, 0, 44),
            (55, 10, 0, 65),
            (15, 10, 19, 44),
            (15, 10, 0, 25),
        ]
    );
    assert!(scored.iter().all(|s| s.is_additive() && !s.clamped));
    assert_eq!(scored.iter().map(|s| s.play_id).collect::<Vec<_>>(), (1..=10).collect::<Vec<_>>());
}

#[test]
fn twenty_five_positive_gaps_get_twenty_down_to_one() {
    // Plays 1-25: small swings, high leverage. Plays 26-50: the reverse.
    let mut rows = Vec::new();
    for i in 0..25 {
        rows.push((3, 0.001 * (i + 1) as f64, 10.0 - 0.1 * i as f64));
    }
    for j in 0..25 {
        rows.push((3, 0.5 + 0.01 * j as f64, 0.001 * (j + 1) as f64));
    }
    let annotated = plays(&rows);
    let ranks = rank_plays(&annotated);
    assert_eq!(ranks.iter().filter(|r| r.delta_r > 0).count(), 25);
    let bonuses = li_rank_correction(&ranks);
    let first_25: Vec<u32> = (1..=25).map(|id| bonuses[&id]).collect();
    let expected: Vec<u32> = (1..=20).rev().chain([0; 5]).collect();
    assert_eq!(first_25, expected);
    assert!((26..=50).all(|id| bonuses[&id] == 0));
    assert_eq!(bonuses[&1], 20);

    let scored = decide_mock(&annotated).unwrap();
    assert_eq!(scored.iter().map(|s| s.li_bonus).take(25).collect::<Vec<_>>(), expected.iter().map(|&b| b as i64).collect::<Vec<_>>());
}

#[test]
fn equal_gaps_are_ordered_chronologically() {
    let mut rows = Vec::new();
    for i in 0..25 {
        rows.push((3, 0.001 * (i + 1) as f64, 10.0 + i as f64));
    }
    for j in 0..25 {
        rows.push((3, 0.5 + 0.01 * j as f64, 0.001 * (j + 1) as f64));
    }
    let ranks = rank_plays(&plays(&rows));
    assert!(ranks[..25].iter().all(|r| r.delta_r == 25));
    let bonuses = li_rank_correction(&ranks);
    assert_eq!((bonuses[&1], bonuses[&2], bonuses[&20], bonuses[&21]), (20, 19, 1, 0));
}

#[test]
fn bonus_schedule() {
    let got: Vec<u32> = (1..=23).map(bonus_for_position).collect();
    assert_eq!(&got[..3], &[20, 19, 18]);
    assert_eq!(&got[19..], &[1, 0, 0, 0]);
}

#[test]
fn real_annotations_yield_no_rank_gaps() {
    let table = common::reference_table();
    for i in 0..6 {
        let annotated = baseball_highlights::sabermetrics::annotate_game(&table, &common::heldout(i)).unwrap();
        let ranks = rank_plays(&annotated);
        assert!(ranks.iter().all(|r| r.r_wpa == r.r_li && r.delta_r == 0));
    }
}

#[test]
fn empty_input_is_an_error() {
    assert!(matches!(decide_mock(&[]), Err(ScoringError::NoPlays)));
}

#[test]
fn ledger_is_jsonl_in_play_order() {
    let table = common::reference_table();
    let game = common::heldout(1);
    let annotated = baseball_highlights::sabermetrics::annotate_game(&table, &game).unwrap();
    let start = Instant::now();
    let scored = decide_mock(&annotated).unwrap();
    assert!(start.elapsed().as_secs_f64() < 2.0);
    let report = scored_report(&scored);
    let back: Vec<ScoredPlay> = report.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(back, scored);
    assert_eq!(back.len(), game.plays.len());
}

proptest! {
    #[test]
    fn ranks_match_counting_oracle(values in prop::collection::vec((0u32..20, 0u32..20), 1..60)) {
        let rows: Vec<(u32, f64, f64)> = values.iter().map(|&(w, l)| (4, w as f64 / 40.0, l as f64 / 4.0)).collect();
        let annotated = plays(&rows);
        let wpa: Vec<f64> = annotated.iter().map(|a| a.wpa.abs()).collect();
        let li: Vec<f64> = annotated.iter().map(|a| a.li).collect();
        for (i, r) in rank_plays(&annotated).iter().enumerate() {
            prop_assert_eq!(r.r_wpa, rank_oracle(&wpa, i));
            prop_assert_eq!(r.r_li, rank_oracle(&li, i));
            prop_assert_eq!(r.delta_r, r.r_wpa as i64 - r.r_li as i64);
        }
    }

    #[test]
    fn bonuses_follow_gap_order(values in prop::collection::vec((0u32..30, 0u32..30), 1..60)) {
        let rows: Vec<(u32, f64, f64)> = values.iter().map(|&(w, l)| (4, w as f64 / 60.0, l as f64)).collect();
        let ranks = rank_plays(&plays(&rows));
        let bonuses = li_rank_correction(&ranks);
        let mut order: Vec<usize> = (0..ranks.len()).filter(|&i| ranks[i].delta_r > 0).collect();
        order.sort_by_key(|&i| (-ranks[i].delta_r, i));
        for (position, &i) in order.iter().enumerate() {
            prop_assert_eq!(bonuses[&ranks[i].play_id], 20u32.saturating_sub(position as u32));
        }
        for r in ranks.iter().filter(|r| r.delta_r <= 0) {
            prop_assert_eq!(bonuses[&r.play_id], 0);
        }
    }

    #[test]
    fn final_scores_are_additive_and_bounded(values in prop::collection::vec((1u32..13, -1000i64..=1000, 0u32..50), 1..50)) {
        let rows: Vec<(u32, f64, f64)> = values.iter().map(|&(inn, w, l)| (inn, w as f64 / 1000.0, l as f64 / 10.0)).collect();
        for s in decide_mock(&plays(&rows)).unwrap() {
            prop_assert!(s.is_additive());
            prop_assert!((1..=60).contains(&s.base_score));
            prop_assert!((1..=20).contains(&s.llm_adjustment));
            prop_assert!((0..=20).contains(&s.li_bonus));
        }
    }

    #[test]
    fn bigger_swings_never_score_lower(inning in 1u32..13, a in 0i64..=1000, b in 0i64..=1000) {
        let (lo, hi) = (a.min(b) as f64 / 1000.0, a.max(b) as f64 / 1000.0);
        let scored = decide_mock(&plays(&[(inning, lo, 0.0), (inning, hi, 0.0)])).unwrap();
        prop_assert!(scored[0].base_score <= scored[1].base_score);
        prop_assert!(scored[0].base_score + scored[0].llm_adjustment <= scored[1].base_score + scored[1].llm_adjustment);
    }
}
