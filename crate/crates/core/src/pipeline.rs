//! End-to-end run over one game: annotate, decide, reflect.

use std::fmt;

use thiserror::Error;

use crate::gamelog::{validate_log, GameLog};
use crate::llm::{LlmContext, LlmError};
use crate::reflection::{
    apply_preferences, emit_manifest, select_top_k, ClipOptions, HighlightSelection, Manifest,
    PreferenceWarning, Preferences, PreferredPlay, ReflectionError,
};
use crate::sabermetrics::{annotate_game, AnnotatedPlay, SabermetricsError, WETable};
use crate::scoring::{decide, ScoredPlay, ScoringError, MAX_LI_BONUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Parse,
    Annotate,
    Decide,
    Reflect,
    Verify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Parse => "parse",
            Stage::Annotate => "annotate",
            Stage::Decide => "decide",
            Stage::Reflect => "reflect",
            Stage::Verify => "verify",
        })
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("annotate: {0}")]
    Annotate(#[from] SabermetricsError),
    #[error("decide: {0}")]
    Decide(#[from] ScoringError),
    #[error("reflect: {0}")]
    Reflect(#[from] ReflectionError),
    #[error("verify: {0}")]
    Invariant(String),
}

impl PipelineError {
    pub fn stage(&self) -> Stage {
        match self {
            PipelineError::Annotate(_) => Stage::Annotate,
            PipelineError::Decide(_) => Stage::Decide,
            PipelineError::Reflect(_) => Stage::Reflect,
            PipelineError::Invariant(_) => Stage::Verify,
        }
    }

    pub fn is_backend_failure(&self) -> bool {
        matches!(
            self,
            PipelineError::Decide(ScoringError::Llm(
                LlmError::BackendUnavailable(_) | LlmError::SchemaViolation { .. }
            ))
        )
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub annotated: Vec<AnnotatedPlay>,
    pub scored: Vec<ScoredPlay>,
    pub preferred: Vec<PreferredPlay>,
    pub warnings: Vec<PreferenceWarning>,
    pub selection: HighlightSelection,
    pub manifest: Manifest,
    /// Table lookups that fell back during annotation.
    pub table_misses: u64,
}

/// Annotation plus scoring: everything that does not depend on K.
pub fn score_game(
    table: &WETable,
    log: &GameLog,
    ctx: &LlmContext<'_>,
) -> Result<(Vec<AnnotatedPlay>, Vec<ScoredPlay>), PipelineError> {
    let annotated = annotate_game(table, log)?;
    let scored = decide(ctx, &annotated)?;
    Ok((annotated, scored))
}

pub fn run_pipeline(
    table: &WETable,
    log: &GameLog,
    ctx: &LlmContext<'_>,
    prefs: &Preferences,
    clip: &ClipOptions,
) -> Result<PipelineOutput, PipelineError> {
    let misses_before = table.misses();
    let (annotated, scored) = score_game(table, log, ctx)?;
    let table_misses = table.misses() - misses_before;
    let (preferred, warnings) = apply_preferences(&scored, log, prefs)?;
    let mut selection = select_top_k(&log.game_id, &preferred, prefs.k)?;
    let manifest = emit_manifest(&mut selection, log, clip)?;
    let output = PipelineOutput {
        annotated,
        scored,
        preferred,
        warnings,
        selection,
        manifest,
        table_misses,
    };
    check_invariants(log, &output).map_err(PipelineError::Invariant)?;
    Ok(output)
}

/// Post-run consistency checks over the whole ledger.
pub fn check_invariants(log: &GameLog, out: &PipelineOutput) -> Result<(), String> {
    if !validate_log(log).iter().all(|i| !i.is_chain_break()) {
        return Err("log state chain broken".into());
    }
    for s in &out.scored {
        if !s.is_additive() {
            return Err(format!("play {}: final score is not additive", s.play_id));
        }
        if !(1..=60).contains(&s.base_score)
            || !(1..=20).contains(&s.llm_adjustment)
            || !(0..=i64::from(MAX_LI_BONUS)).contains(&s.li_bonus)
        {
            return Err(format!("play {}: score component out of range", s.play_id));
        }
    }
    let clips = &out.manifest.clips;
    for pair in clips.windows(2) {
        if pair[1].clip_start_ms < pair[0].clip_end_ms {
            return Err(format!("clips for {} and {} overlap", pair[0].play_id, pair[1].play_id));
        }
    }
    if clips.iter().any(|c| c.clip_end_ms < c.clip_start_ms) {
        return Err("negative clip length".into());
    }
    Ok(())
}
