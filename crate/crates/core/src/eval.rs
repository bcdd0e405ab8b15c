//! Precision / recall / F1 against ground-truth highlight sets, the
//! WPA-only baseline, and K sweeps.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamelog::GameLog;
use crate::sabermetrics::AnnotatedPlay;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("ground truth is empty")]
    EmptyGroundTruth,
    #[error("ground truth for {game_id} names unknown play {play_id}")]
    UnknownGroundTruthPlay { game_id: String, play_id: i64 },
    #[error("ground truth is for {found}, expected {expected}")]
    GameMismatch { expected: String, found: String },
    #[error("k grid is empty")]
    EmptyGrid,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed ground truth: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub game_id: String,
    pub gt_play_ids: BTreeSet<i64>,
}

impl GroundTruth {
    pub fn new(game_id: impl Into<String>, ids: impl IntoIterator<Item = i64>) -> Self {
        GroundTruth {
            game_id: game_id.into(),
            gt_play_ids: ids.into_iter().collect(),
        }
    }

    /// Non-empty, same game, every id present in the log.
    pub fn check_against(&self, log: &GameLog) -> Result<(), EvalError> {
        if self.gt_play_ids.is_empty() {
            return Err(EvalError::EmptyGroundTruth);
        }
        if self.game_id != log.game_id {
            return Err(EvalError::GameMismatch {
                expected: log.game_id.clone(),
                found: self.game_id.clone(),
            });
        }
        match self.gt_play_ids.iter().find(|id| log.play(**id).is_none()) {
            Some(&play_id) => Err(EvalError::UnknownGroundTruthPlay {
                game_id: self.game_id.clone(),
                play_id,
            }),
            None => Ok(()),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<GroundTruth, EvalError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| EvalError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let gt: GroundTruth =
            serde_json::from_str(&text).map_err(|e| EvalError::Malformed(e.to_string()))?;
        if gt.gt_play_ids.is_empty() {
            return Err(EvalError::EmptyGroundTruth);
        }
        Ok(gt)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("ground truth serializes");
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub selected_count: usize,
    pub gt_count: usize,
    pub intersection_count: usize,
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// Exact play-id matching. An empty selection has precision 0.
pub fn precision_recall_f1(selected: &BTreeSet<i64>, gt: &GroundTruth) -> Result<EvalReport, EvalError> {
    if gt.gt_play_ids.is_empty() {
        return Err(EvalError::EmptyGroundTruth);
    }
    let hits = selected.intersection(&gt.gt_play_ids).count();
    let precision = if selected.is_empty() {
        0.0
    } else {
        hits as f64 / selected.len() as f64
    };
    let recall = hits as f64 / gt.gt_play_ids.len() as f64;
    Ok(EvalReport {
        precision,
        recall,
        f1: f1_score(precision, recall),
        selected_count: selected.len(),
        gt_count: gt.gt_play_ids.len(),
        intersection_count: hits,
    })
}

/// Top `k` plays by |WPA| alone, earlier play first on ties.
pub fn wpa_baseline_select(annotated: &[AnnotatedPlay], k: usize) -> Result<BTreeSet<i64>, EvalError> {
    if k == 0 {
        return Err(EvalError::InvalidK);
    }
    let mut order: Vec<usize> = (0..annotated.len()).collect();
    order.sort_by(|&a, &b| {
        annotated[b]
            .wpa
            .abs()
            .total_cmp(&annotated[a].wpa.abs())
            .then(a.cmp(&b))
    });
    Ok(order.into_iter().take(k).map(|i| annotated[i].play.id).collect())
}

pub const DEFAULT_K_GRID: [usize; 9] = [10, 20, 30, 40, 50, 60, 70, 80, 90];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSweepEntry {
    pub k: usize,
    pub mean_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSweepReport {
    pub entries: Vec<KSweepEntry>,
    pub argmax_k: usize,
}

impl KSweepReport {
    pub fn mean_f1_at(&self, k: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.k == k).map(|e| e.mean_f1)
    }

    pub fn best_mean_f1(&self) -> f64 {
        self.mean_f1_at(self.argmax_k).unwrap_or(0.0)
    }

    /// `k,mean_f1` rows for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,mean_f1\n");
        for e in &self.entries {
            writeln!(out, "{},{:.6}", e.k, e.mean_f1).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("sweep serializes");
        out.push('\n');
        out
    }
}

/// Mean F1 across games for every k in the grid. The selector is called once
/// per (game, k). The highest mean wins, smaller k on ties.
pub fn sweep_k<G, E, F>(games: &[(G, GroundTruth)], mut selector: F, k_grid: &[usize]) -> Result<KSweepReport, E>
where
    E: From<EvalError>,
    F: FnMut(&G, usize) -> Result<BTreeSet<i64>, E>,
{
    if k_grid.is_empty() {
        return Err(EvalError::EmptyGrid.into());
    }
    let mut entries = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let mut total = 0.0;
        for (game, gt) in games {
            let selected = selector(game, k)?;
            total += precision_recall_f1(&selected, gt)?.f1;
        }
        let mean_f1 = if games.is_empty() {
            0.0
        } else {
            total / games.len() as f64
        };
        entries.push(KSweepEntry { k, mean_f1 });
    }
    let argmax_k = entries
        .iter()
        .fold(None::<&KSweepEntry>, |best, e| match best {
            Some(b) if b.mean_f1 > e.mean_f1 || (b.mean_f1 == e.mean_f1 && b.k <= e.k) => Some(b),
            _ => Some(e),
        })
        .map(|e| e.k)
        .expect("grid is non-empty");
    Ok(KSweepReport { entries, argmax_k })
}
