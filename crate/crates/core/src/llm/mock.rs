//! Rule-based stand-in for the language model.
//!
//! Reads the structured payload of a request (never the prompt text) and
//! answers with the same JSON shapes a model is asked for:
//!
//! * analysis: sentences chosen from the sign of WPA, its band, and the inning;
//! * transform: the band midpoint, +5 from the 7th inning on, clamped to the band;
//! * adjust: +10 when the analysis mentions momentum-type keywords, else +2.

use serde_json::{json, Value};

use super::bands::ImportanceBand;
use super::{Backend, BackendKind, CompletionRequest, LlmError, TemplateId};
use crate::gamelog::parse_inning_label;

pub const LATE_INNING: u32 = 7;
pub const LATE_INNING_BOOST: i64 = 5;
pub const MOMENTUM_KEYWORDS: &[&str] = &["momentum", "game-defining", "clutch", "turning point"];
pub const STRONG_ADJUSTMENT: i64 = 10;
pub const WEAK_ADJUSTMENT: i64 = 2;

#[derive(Debug, Clone, Copy, Default)]
pub struct MockBackend;

fn field<'a>(item: &'a Value, name: &str) -> Result<&'a Value, LlmError> {
    item.get(name)
        .ok_or_else(|| LlmError::BackendUnavailable(format!("mock: payload lacks `{name}`")))
}

fn number(item: &Value, name: &str) -> Result<f64, LlmError> {
    field(item, name)?
        .as_f64()
        .ok_or_else(|| LlmError::BackendUnavailable(format!("mock: `{name}` is not a number")))
}

fn inning_of(item: &Value, name: &str) -> Result<u32, LlmError> {
    let text = field(item, name)?.as_str().unwrap_or_default();
    parse_inning_label(text)
        .map(|(_, inning)| inning)
        .ok_or_else(|| LlmError::BackendUnavailable(format!("mock: cannot read inning `{text}`")))
}

fn items(payload: &Value) -> Result<&Vec<Value>, LlmError> {
    field(payload, "plays")?
        .as_array()
        .ok_or_else(|| LlmError::BackendUnavailable("mock: `plays` is not an array".into()))
}

/// Analysis text as a pure function of sign(wpa), band and inning.
pub fn mock_analysis(wpa: f64, inning: u32) -> String {
    let direction = if wpa > 0.0 {
        "raised the home team's chances of winning"
    } else if wpa < 0.0 {
        "benefited the away team, lowering the home team's chances of winning"
    } else {
        "left the win probability unchanged"
    };
    let size = match ImportanceBand::for_wpa(wpa) {
        ImportanceBand::High => "It was a game-defining swing that shifted the momentum decisively.",
        ImportanceBand::Moderate => "It was a notable swing in win probability.",
        ImportanceBand::Low => "The change was minor, part of the ebb and flow of the game.",
    };
    let timing = if inning >= LATE_INNING {
        "Coming late in the game, it carried clutch weight.".to_string()
    } else {
        format!("It came in inning {inning} with plenty of game left.")
    };
    format!("This play {direction} (WPA {wpa:+.3}). {size} {timing}")
}

pub fn mentions_momentum(analysis: &str) -> bool {
    let lower = analysis.to_lowercase();
    MOMENTUM_KEYWORDS.iter().any(|kw| lower.contains(kw))
}

pub fn mock_base_score(wpa: f64, inning: u32) -> i64 {
    let band = ImportanceBand::for_wpa(wpa);
    let boost = if inning >= LATE_INNING { LATE_INNING_BOOST } else { 0 };
    band.clamp(band.midpoint() + boost)
}

pub fn mock_adjustment(analysis: &str) -> i64 {
    if mentions_momentum(analysis) {
        STRONG_ADJUSTMENT
    } else {
        WEAK_ADJUSTMENT
    }
}

impl MockBackend {
    fn analyze(&self, payload: &Value) -> Result<Value, LlmError> {
        let id = field(payload, "id")?.clone();
        let wpa = number(payload, "WPA")?;
        let inning = inning_of(payload, "inning")?;
        Ok(json!({ "id": id, "WPA_analysis": mock_analysis(wpa, inning) }))
    }

    fn transform(&self, payload: &Value) -> Result<Value, LlmError> {
        let scored = items(payload)?
            .iter()
            .map(|item| {
                let wpa = number(item, "WPA")?;
                let inning = inning_of(item, "inning info")?;
                let band = ImportanceBand::for_wpa(wpa);
                Ok(json!({
                    "id": field(item, "id")?.clone(),
                    "score": mock_base_score(wpa, inning),
                    "rationale": format!("|WPA| {:.3} is {band}; inning {inning}", wpa.abs()),
                }))
            })
            .collect::<Result<Vec<_>, LlmError>>()?;
        Ok(Value::Array(scored))
    }

    fn adjust(&self, payload: &Value) -> Result<Value, LlmError> {
        let scored = items(payload)?
            .iter()
            .map(|item| {
                let base = field(item, "score")?.as_i64().unwrap_or_default();
                let analysis = field(item, "WPA analysis")?.as_str().unwrap_or_default();
                let delta = mock_adjustment(analysis);
                Ok(json!({
                    "id": field(item, "id")?.clone(),
                    "score": base + delta,
                    "rationale": format!("base {base} {delta:+} from analysis"),
                }))
            })
            .collect::<Result<Vec<_>, LlmError>>()?;
        Ok(Value::Array(scored))
    }
}

impl Backend for MockBackend {
    fn kind(&self) -> BackendKind {
        BackendKind::DeterministicMock
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn complete(&self, request: &CompletionRequest) -> Result<String, LlmError> {
        let reply = match request.template {
            TemplateId::WpaAnalysis => self.analyze(&request.payload)?,
            TemplateId::WpaTransform => self.transform(&request.payload)?,
            TemplateId::ScoreAdjust => self.adjust(&request.payload)?,
        };
        Ok(reply.to_string())
    }
}
