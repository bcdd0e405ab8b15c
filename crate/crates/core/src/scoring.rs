//! Decision stage: base score + narrative adjustment + leverage rank bonus.
//!
//! `final_score = base_score + llm_adjustment + li_bonus`, nothing else. The
//! bonus goes to plays whose leverage rank beats their |WPA| rank
//! (`delta_r = r_wpa - r_li > 0`): +20 for the largest rank gap, one point
//! less per position after that, zero from position 21 on. All ties are
//! broken chronologically.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamelog::{preceding, Play, DEFAULT_CONTEXT_PLAYS};
use crate::llm::{
    adjust_scores, analyze_many, transform_wpa_scores, AdjustInput, LlmContext, LlmError,
    TransformInput,
};
use crate::sabermetrics::AnnotatedPlay;

pub const MAX_LI_BONUS: u32 = 20;

#[derive(Debug, Error)]
pub enum ScoringError {
    #[error("no plays to score")]
    NoPlays,
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error("failed to write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Per-play audit ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredPlay {
    pub play_id: i64,
    pub wpa: f64,
    pub li: f64,
    pub base_score: i64,
    pub llm_adjustment: i64,
    pub li_bonus: i64,
    pub final_score: i64,
    #[serde(default)]
    pub wpa_analysis: String,
    /// A backend reply was clamped for this play.
    #[serde(default)]
    pub clamped: bool,
}

impl ScoredPlay {
    pub fn is_additive(&self) -> bool {
        self.final_score == self.base_score + self.llm_adjustment + self.li_bonus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRecord {
    pub play_id: i64,
    /// 1 = largest |WPA|.
    pub r_wpa: usize,
    /// 1 = largest LI.
    pub r_li: usize,
    pub delta_r: i64,
}

/// 1-based ranks by descending `key`; earlier items win ties.
fn descending_ranks(keys: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; keys.len()];
    for (rank, index) in order.into_iter().enumerate() {
        ranks[index] = rank + 1;
    }
    ranks
}

/// Ranks plays by |WPA| and by LI. Output is in input (chronological) order.
pub fn rank_plays(annotated: &[AnnotatedPlay]) -> Vec<RankRecord> {
    let wpa: Vec<f64> = annotated.iter().map(|a| a.wpa.abs()).collect();
    let li: Vec<f64> = annotated.iter().map(|a| a.li).collect();
    let r_wpa = descending_ranks(&wpa);
    let r_li = descending_ranks(&li);
    annotated
        .iter()
        .enumerate()
        .map(|(i, a)| RankRecord {
            play_id: a.play.id,
            r_wpa: r_wpa[i],
            r_li: r_li[i],
            delta_r: r_wpa[i] as i64 - r_li[i] as i64,
        })
        .collect()
}

/// Bonus for the 1-based position in the positive-ΔR ordering.
pub fn bonus_for_position(position: usize) -> u32 {
    (MAX_LI_BONUS + 1).saturating_sub(position as u32)
}

/// Leverage bonus per play id. Plays with `delta_r <= 0` get 0.
pub fn li_rank_correction(ranks: &[RankRecord]) -> BTreeMap<i64, u32> {
    let mut order: Vec<usize> = (0..ranks.len()).collect();
    order.sort_by(|&a, &b| ranks[b].delta_r.cmp(&ranks[a].delta_r).then(a.cmp(&b)));
    let mut bonuses: BTreeMap<i64, u32> = ranks.iter().map(|r| (r.play_id, 0)).collect();
    for (position, index) in order
        .into_iter()
        .take_while(|&i| ranks[i].delta_r > 0)
        .enumerate()
    {
        bonuses.insert(ranks[index].play_id, bonus_for_position(position + 1));
    }
    bonuses
}

/// Runs analysis, transform and adjustment through the model, then adds the
/// leverage bonus. Returns one record per play in chronological order.
pub fn decide(ctx: &LlmContext<'_>, annotated: &[AnnotatedPlay]) -> Result<Vec<ScoredPlay>, ScoringError> {
    if annotated.is_empty() {
        return Err(ScoringError::NoPlays);
    }
    let plays: Vec<Play> = annotated.iter().map(|a| a.play.clone()).collect();

    let requests: Vec<(&Play, &[Play], f64)> = annotated
        .iter()
        .enumerate()
        .map(|(i, a)| (&plays[i], preceding(&plays, i, DEFAULT_CONTEXT_PLAYS), a.wpa))
        .collect();
    let analyses = analyze_many(ctx, &requests)?;

    let transform_inputs: Vec<TransformInput> = annotated
        .iter()
        .map(|a| TransformInput::from_play(&a.play, a.wpa))
        .collect();
    let base = transform_wpa_scores(ctx, &transform_inputs)?;

    let adjust_inputs: Vec<AdjustInput> = transform_inputs
        .iter()
        .zip(&base)
        .zip(&analyses)
        .map(|((input, base), analysis)| AdjustInput {
            id: input.id,
            result: input.result.clone(),
            inning_info: input.inning_info.clone(),
            base_score: base.score,
            wpa_analysis: analysis.wpa_analysis.clone(),
        })
        .collect();
    let adjusted = adjust_scores(ctx, &adjust_inputs)?;

    let bonuses = li_rank_correction(&rank_plays(annotated));

    Ok(annotated
        .iter()
        .zip(base)
        .zip(adjusted)
        .zip(analyses)
        .map(|(((a, base), adjusted), analysis)| {
            let li_bonus = i64::from(bonuses[&a.play.id]);
            let llm_adjustment = adjusted.score - base.score;
            ScoredPlay {
                play_id: a.play.id,
                wpa: a.wpa,
                li: a.li,
                base_score: base.score,
                llm_adjustment,
                li_bonus,
                final_score: base.score + llm_adjustment + li_bonus,
                wpa_analysis: analysis.wpa_analysis,
                clamped: base.clamped || adjusted.clamped,
            }
        })
        .collect())
}

/// One JSON record per line.
pub fn scored_report(scored: &[ScoredPlay]) -> String {
    let mut out = String::new();
    for play in scored {
        out.push_str(&serde_json::to_string(play).expect("scored play serializes"));
        out.push('\n');
    }
    out
}

pub fn write_scored_report(path: impl AsRef<Path>, scored: &[ScoredPlay]) -> Result<(), ScoringError> {
    let path = path.as_ref();
    fs::write(path, scored_report(scored)).map_err(|source| ScoringError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank(id: i64, delta_r: i64) -> RankRecord {
        RankRecord {
            play_id: id,
            r_wpa: 0,
            r_li: 0,
            delta_r,
        }
    }

    #[test]
    fn ranks_break_ties_chronologically() {
        assert_eq!(descending_ranks(&[0.3, 0.1]), [1, 2]);
        assert_eq!(descending_ranks(&[0.1, 0.3]), [2, 1]);
        assert_eq!(descending_ranks(&[0.2, 0.2, 0.2]), [1, 2, 3]);
        assert_eq!(descending_ranks(&[]), Vec::<usize>::new());
    }

    #[test]
    fn bonus_schedule() {
        assert_eq!(bonus_for_position(1), 20);
        assert_eq!(bonus_for_position(2), 19);
        assert_eq!(bonus_for_position(20), 1);
        assert_eq!(bonus_for_position(21), 0);
        assert_eq!(bonus_for_position(500), 0);
    }

    #[test]
    fn only_positive_gaps_earn_bonus() {
        let ranks = [rank(1, 0), rank(2, 3), rank(3, -2), rank(4, 3), rank(5, 7)];
        let bonuses = li_rank_correction(&ranks);
        assert_eq!(bonuses[&5], 20);
        assert_eq!(bonuses[&2], 19); // earlier of the tied pair
        assert_eq!(bonuses[&4], 18);
        assert_eq!(bonuses[&1], 0);
        assert_eq!(bonuses[&3], 0);
    }
}
