use serde::Serialize;

use super::table::WETable;
use super::SabermetricsError;
use crate::gamelog::{validate_log, GameLog, Play, ValidationIssue};

/// A play together with its win expectancy swing and leverage.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedPlay {
    pub play: Play,
    pub we_before: f64,
    pub we_after: f64,
    pub wpa: f64,
    pub li: f64,
}

impl AnnotatedPlay {
    pub fn id(&self) -> i64 {
        self.play.id
    }
}

/// Compact per-play record for reports.
#[derive(Debug, Clone, Serialize)]
pub struct AnnotationRecord {
    pub id: i64,
    pub we_before: f64,
    pub we_after: f64,
    pub wpa: f64,
    pub li: f64,
}

impl From<&AnnotatedPlay> for AnnotationRecord {
    fn from(a: &AnnotatedPlay) -> Self {
        AnnotationRecord {
            id: a.play.id,
            we_before: a.we_before,
            we_after: a.we_after,
            wpa: a.wpa,
            li: a.li,
        }
    }
}

/// Win probability added by a play; positive favours the home team.
pub fn compute_wpa(we_before: f64, we_after: f64) -> f64 {
    we_after - we_before
}

/// Realised swing relative to the corpus-average swing.
pub fn compute_li(table: &WETable, we_before: f64, we_after: f64) -> Result<f64, SabermetricsError> {
    let denominator = table.avg_abs_dwe();
    if denominator == 0.0 {
        return Err(SabermetricsError::ZeroDenominator);
    }
    Ok(compute_wpa(we_before, we_after).abs() / denominator)
}

/// (we_before, we_after) per play, each play's "after" reused as the next "before".
pub(crate) fn we_chain<'a>(
    table: &'a WETable,
    game: &'a GameLog,
) -> impl Iterator<Item = (f64, f64)> + 'a {
    let outcome = game.outcome();
    let mut current = game
        .plays
        .first()
        .map(|p| table.lookup_we(&p.state_before, None))
        .unwrap_or(0.5);
    game.plays.iter().map(move |play| {
        let terminal = play.is_terminal.then_some(outcome);
        let after = table.lookup_we(&play.state_after, terminal);
        let step = (current, after);
        current = after;
        step
    })
}

/// Annotates every play of a chained log with WE, WPA and LI.
pub fn annotate_game(table: &WETable, log: &GameLog) -> Result<Vec<AnnotatedPlay>, SabermetricsError> {
    if let Some(ValidationIssue::ChainBreak { index }) =
        validate_log(log).into_iter().find(ValidationIssue::is_chain_break)
    {
        return Err(SabermetricsError::ChainBreak { index });
    }
    if table.avg_abs_dwe() == 0.0 {
        return Err(SabermetricsError::ZeroDenominator);
    }
    we_chain(table, log)
        .zip(&log.plays)
        .map(|((we_before, we_after), play)| {
            Ok(AnnotatedPlay {
                play: play.clone(),
                we_before,
                we_after,
                wpa: compute_wpa(we_before, we_after),
                li: compute_li(table, we_before, we_after)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wpa_examples() {
        assert_eq!(compute_wpa(0.5, 0.5), 0.0);
        assert_eq!(compute_wpa(0.0, 1.0), 1.0);
        assert_eq!(compute_wpa(1.0, 0.0), -1.0);
        assert!((compute_wpa(0.552, 0.500) - -0.052).abs() < 1e-12);
    }
}
