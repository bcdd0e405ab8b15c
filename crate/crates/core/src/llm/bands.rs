use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

/// Base-score band keyed on |WPA|. Intervals are left-closed:
/// [0, 0.05) low, [0.05, 0.15) moderate, [0.15, ∞) high.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImportanceBand {
    Low,
    Moderate,
    High,
}

pub const MODERATE_THRESHOLD: f64 = 0.05;
pub const HIGH_THRESHOLD: f64 = 0.15;

pub const MIN_BASE_SCORE: i64 = 1;
pub const MAX_BASE_SCORE: i64 = 60;
pub const MIN_ADJUSTMENT: i64 = 1;
pub const MAX_ADJUSTMENT: i64 = 20;

impl ImportanceBand {
    pub fn for_wpa(wpa: f64) -> ImportanceBand {
        let magnitude = wpa.abs();
        if magnitude >= HIGH_THRESHOLD {
            ImportanceBand::High
        } else if magnitude >= MODERATE_THRESHOLD {
            ImportanceBand::Moderate
        } else {
            ImportanceBand::Low
        }
    }

    pub fn range(self) -> RangeInclusive<i64> {
        match self {
            ImportanceBand::Low => 1..=19,
            ImportanceBand::Moderate => 20..=39,
            ImportanceBand::High => 40..=60,
        }
    }

    pub fn midpoint(self) -> i64 {
        let range = self.range();
        (range.start() + range.end()) / 2
    }

    pub fn clamp(self, score: i64) -> i64 {
        let range = self.range();
        score.clamp(*range.start(), *range.end())
    }
}

impl fmt::Display for ImportanceBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImportanceBand::Low => "low-impact",
            ImportanceBand::Moderate => "moderate-impact",
            ImportanceBand::High => "high-impact",
        })
    }
}

/// Narrative adjustment tiers for the second scoring pass. Tiers share their
/// boundary points (+5, +10).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjustmentTier {
    Minimal,
    Moderate,
    Significant,
}

impl AdjustmentTier {
    pub fn range(self) -> RangeInclusive<i64> {
        match self {
            AdjustmentTier::Minimal => 1..=5,
            AdjustmentTier::Moderate => 5..=10,
            AdjustmentTier::Significant => 10..=20,
        }
    }
}

pub fn clamp_adjustment(delta: i64) -> i64 {
    delta.clamp(MIN_ADJUSTMENT, MAX_ADJUSTMENT)
}
