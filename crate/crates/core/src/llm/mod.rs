//! Language-model boundary: prompts, request settings, reply validation and
//! the three model-backed steps (context analysis, WPA-to-score transform,
//! narrative adjustment).
//!
//! Scores coming back from a backend are never trusted as-is. Base scores are
//! clamped to the band implied by |WPA| and adjustments to +1..=+20; each
//! clamp is flagged on the returned record.

mod bands;
mod config;
mod http;
mod mock;
mod prompt;
mod schema;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

pub use bands::{
    clamp_adjustment, AdjustmentTier, ImportanceBand, HIGH_THRESHOLD, MAX_ADJUSTMENT,
    MAX_BASE_SCORE, MIN_ADJUSTMENT, MIN_BASE_SCORE, MODERATE_THRESHOLD,
};
pub use config::{BackendKind, LLMRequestConfig, DEFAULT_BATCH_SIZE};
pub use http::{request_body, HttpBackend, API_KEY_ENV, ENDPOINT_ENV};
pub use mock::{
    mentions_momentum, mock_adjustment, mock_analysis, mock_base_score, MockBackend,
    MOMENTUM_KEYWORDS,
};
pub use prompt::{render_prompt, substitute, PromptLibrary, TemplateId};
pub use schema::{validate_response, ContextAnalysis, ResponseRecord, ScoreResponse};

use crate::gamelog::Play;

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("missing prompt template: {0}")]
    MissingTemplate(String),
    #[error("unresolved placeholders: {}", .0.join(", "))]
    UnresolvedPlaceholder(Vec<String>),
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("response schema violation: {detail}")]
    SchemaViolation {
        detail: String,
        missing: Vec<i64>,
        extra: Vec<i64>,
    },
    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// One prompt ready to send. `payload` is the structured data the prompt was
/// rendered from; rule-based backends answer from it directly.
#[derive(Debug, Clone)]
pub struct CompletionRequest {
    pub template: TemplateId,
    pub prompt: String,
    pub payload: Value,
    pub config: LLMRequestConfig,
}

pub trait Backend: Send + Sync {
    fn kind(&self) -> BackendKind;

    /// Deterministic backends are never retried and run requests serially.
    fn is_deterministic(&self) -> bool {
        false
    }

    fn complete(&self, request: &CompletionRequest) -> Result<String, LlmError>;
}

/// Everything a model call needs besides its data.
#[derive(Clone, Copy)]
pub struct LlmContext<'a> {
    pub backend: &'a dyn Backend,
    pub prompts: &'a PromptLibrary,
    pub config: &'a LLMRequestConfig,
}

impl<'a> LlmContext<'a> {
    pub fn new(
        backend: &'a dyn Backend,
        prompts: &'a PromptLibrary,
        config: &'a LLMRequestConfig,
    ) -> Self {
        LlmContext {
            backend,
            prompts,
            config,
        }
    }

    fn in_flight(&self) -> usize {
        if self.backend.is_deterministic() {
            1
        } else {
            self.config.max_in_flight.max(1)
        }
    }

    /// Sends a request, re-issuing it on schema violations.
    fn request<R: ResponseRecord>(
        &self,
        template: TemplateId,
        payload: Value,
        expected_ids: &BTreeSet<i64>,
    ) -> Result<Vec<R>, LlmError> {
        let object = payload
            .as_object()
            .cloned()
            .unwrap_or_else(Map::new);
        let prompt = self.prompts.render(template, &object)?;
        let request = CompletionRequest {
            template,
            prompt,
            payload,
            config: self.config.clone(),
        };
        let attempts = if self.backend.is_deterministic() {
            1
        } else {
            self.config.max_retries + 1
        };
        let mut last = None;
        for _ in 0..attempts {
            let raw = self.backend.complete(&request)?;
            match validate_response(&raw, expected_ids) {
                Ok(records) => return Ok(records),
                Err(err @ LlmError::SchemaViolation { .. }) => last = Some(err),
                Err(err) => return Err(err),
            }
        }
        Err(last.expect("at least one attempt"))
    }
}

/// Runs `f` over `items` with at most `limit` calls in flight; output keeps input order.
pub(crate) fn run_bounded<T, R, F>(items: &[T], limit: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if limit <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let f = &f;
    let mut out = Vec::with_capacity(items.len());
    for chunk in items.chunks(limit) {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunk.iter().map(|item| scope.spawn(move || f(item))).collect();
            out.extend(handles.into_iter().map(|h| h.join().expect("model worker panicked")));
        });
    }
    out
}

fn wpa_value(wpa: f64) -> Value {
    // three decimals, matching how plays are presented to the model
    json!((wpa * 1000.0).round() / 1000.0)
}

/// Structured input of the context-analysis prompt.
pub fn analysis_payload(play: &Play, window: &[Play], wpa: f64) -> Value {
    let previous: Vec<Value> = window
        .iter()
        .map(|p| json!({ "id": p.id, "result": p.result }))
        .collect();
    json!({
        "id": play.id,
        "result": play.result,
        "inning": play.state_before.inning_label(),
        "WPA": wpa_value(wpa),
        "previous_plays": previous,
    })
}

/// Writes a short narrative analysis for one play given its recent context.
pub fn analyze_wpa(
    ctx: &LlmContext<'_>,
    play: &Play,
    window: &[Play],
    wpa: f64,
) -> Result<ContextAnalysis, LlmError> {
    let expected = BTreeSet::from([play.id]);
    let mut records: Vec<ContextAnalysis> =
        ctx.request(TemplateId::WpaAnalysis, analysis_payload(play, window, wpa), &expected)?;
    Ok(records.remove(0))
}

/// Play fields sent to the WPA transform.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformInput {
    pub id: i64,
    pub result: String,
    pub inning_info: String,
    pub wpa: f64,
}

impl TransformInput {
    pub fn from_play(play: &Play, wpa: f64) -> Self {
        TransformInput {
            id: play.id,
            result: play.result.clone(),
            inning_info: play.state_before.inning_label(),
            wpa,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "result": self.result,
            "inning info": self.inning_info,
            "WPA": wpa_value(self.wpa),
        })
    }
}

/// Play fields sent to the narrative adjustment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjustInput {
    pub id: i64,
    pub result: String,
    pub inning_info: String,
    pub base_score: i64,
    pub wpa_analysis: String,
}

impl AdjustInput {
    fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "result": self.result,
            "inning info": self.inning_info,
            "score": self.base_score,
            "WPA analysis": self.wpa_analysis,
        })
    }
}

fn check_ids(ids: impl Iterator<Item = i64>) -> Result<Vec<i64>, LlmError> {
    let ids: Vec<i64> = ids.collect();
    if ids.is_empty() {
        return Err(LlmError::InvalidInput("no plays to score".into()));
    }
    let unique: BTreeSet<i64> = ids.iter().copied().collect();
    if unique.len() != ids.len() {
        return Err(LlmError::InvalidInput("duplicate play ids".into()));
    }
    Ok(ids)
}

/// Sends `items` in batches and merges the replies by id, in input order.
fn scored_batches<T: Sync>(
    ctx: &LlmContext<'_>,
    template: TemplateId,
    items: &[T],
    id_of: impl Fn(&T) -> i64 + Sync,
    to_json: impl Fn(&T) -> Value + Sync,
) -> Result<Vec<ScoreResponse>, LlmError> {
    let order = check_ids(items.iter().map(&id_of))?;
    let batches: Vec<&[T]> = items.chunks(ctx.config.batch_size.max(1)).collect();
    let replies = run_bounded(&batches, ctx.in_flight(), |batch| {
        let expected: BTreeSet<i64> = batch.iter().map(&id_of).collect();
        let payload = json!({ "plays": batch.iter().map(&to_json).collect::<Vec<_>>() });
        ctx.request::<ScoreResponse>(template, payload, &expected)
    });
    let mut merged: BTreeMap<i64, ScoreResponse> = BTreeMap::new();
    for reply in replies {
        for record in reply? {
            merged.insert(record.play_id, record);
        }
    }
    Ok(order
        .iter()
        .map(|id| merged.remove(id).expect("coverage checked per batch"))
        .collect())
}

/// Converts WPA into base scores in 1..=60, clamped to the |WPA| band.
pub fn transform_wpa_scores(
    ctx: &LlmContext<'_>,
    plays: &[TransformInput],
) -> Result<Vec<ScoreResponse>, LlmError> {
    let responses = scored_batches(ctx, TemplateId::WpaTransform, plays, |p| p.id, TransformInput::to_json)?;
    Ok(responses
        .into_iter()
        .zip(plays)
        .map(|(mut response, play)| {
            let clamped = ImportanceBand::for_wpa(play.wpa).clamp(response.score);
            if clamped != response.score {
                response.score = clamped;
                response.clamped = true;
            }
            response
        })
        .collect())
}

/// Raises each base score by +1..=+20 according to its analysis.
pub fn adjust_scores(
    ctx: &LlmContext<'_>,
    plays: &[AdjustInput],
) -> Result<Vec<ScoreResponse>, LlmError> {
    let responses = scored_batches(ctx, TemplateId::ScoreAdjust, plays, |p| p.id, AdjustInput::to_json)?;
    Ok(responses
        .into_iter()
        .zip(plays)
        .map(|(mut response, play)| {
            let delta = response.score - play.base_score;
            let bounded = clamp_adjustment(delta);
            if bounded != delta {
                response.score = play.base_score + bounded;
                response.clamped = true;
            }
            response
        })
        .collect())
}

/// Context analyses for many plays, honouring the backend's concurrency limit.
pub fn analyze_many(
    ctx: &LlmContext<'_>,
    requests: &[(&Play, &[Play], f64)],
) -> Result<Vec<ContextAnalysis>, LlmError> {
    run_bounded(requests, ctx.in_flight(), |(play, window, wpa)| {
        analyze_wpa(ctx, play, window, *wpa)
    })
    .into_iter()
    .collect()
}
