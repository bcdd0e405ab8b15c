//! Response parsing: the reply must cover exactly the requested play ids.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::LlmError;

/// One typed record of a model reply.
pub trait ResponseRecord: Sized {
    /// Builds the record from its JSON object. `Err` names the offending field.
    fn from_object(id: i64, object: &Map<String, Value>) -> Result<Self, String>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextAnalysis {
    pub play_id: i64,
    pub wpa_analysis: String,
}

impl ResponseRecord for ContextAnalysis {
    fn from_object(id: i64, object: &Map<String, Value>) -> Result<Self, String> {
        let text = object
            .get("WPA_analysis")
            .and_then(Value::as_str)
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .ok_or_else(|| "WPA_analysis".to_string())?;
        Ok(ContextAnalysis {
            play_id: id,
            wpa_analysis: text.to_string(),
        })
    }
}

/// A score for one play. `clamped` is set when the model's number was pulled
/// back into the allowed range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub play_id: i64,
    pub score: i64,
    pub rationale: String,
    #[serde(default)]
    pub clamped: bool,
}

impl ResponseRecord for ScoreResponse {
    fn from_object(id: i64, object: &Map<String, Value>) -> Result<Self, String> {
        let score = object
            .get("score")
            .and_then(Value::as_i64)
            .ok_or_else(|| "score".to_string())?;
        let rationale = match object.get("rationale") {
            None | Some(Value::Null) => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err("rationale".to_string()),
        };
        Ok(ScoreResponse {
            play_id: id,
            score,
            rationale,
            clamped: false,
        })
    }
}

/// Strips a surrounding markdown code fence if present.
fn unfence(raw: &str) -> &str {
    let trimmed = raw.trim();
    let Some(body) = trimmed.strip_prefix("```") else {
        return trimmed;
    };
    let body = body.strip_suffix("```").unwrap_or(body);
    match body.find('\n') {
        Some(newline) if !body[..newline].trim_start().starts_with(['[', '{']) => {
            body[newline + 1..].trim()
        }
        _ => body.trim(),
    }
}

fn violation(detail: impl Into<String>) -> LlmError {
    LlmError::SchemaViolation {
        detail: detail.into(),
        missing: Vec::new(),
        extra: Vec::new(),
    }
}

/// Parses a reply holding one object or an array of objects, each with an
/// integer `id`. Ids must match `expected_ids` exactly. Records come back
/// ordered by id.
pub fn validate_response<R: ResponseRecord>(
    raw: &str,
    expected_ids: &BTreeSet<i64>,
) -> Result<Vec<R>, LlmError> {
    let value: Value = serde_json::from_str(unfence(raw))
        .map_err(|e| violation(format!("reply is not valid JSON: {e}")))?;
    let items = match value {
        Value::Array(items) => items,
        Value::Object(object) if object.contains_key("id") => vec![Value::Object(object)],
        Value::Object(object) => {
            // {"plays": [...]} style wrappers around the array
            let mut arrays = object.into_iter().filter_map(|(_, v)| match v {
                Value::Array(items) => Some(items),
                _ => None,
            });
            match (arrays.next(), arrays.next()) {
                (Some(items), None) => items,
                _ => return Err(violation("reply object has no `id` and no single array")),
            }
        }
        _ => return Err(violation("reply is neither an object nor an array")),
    };

    let mut by_id: BTreeMap<i64, Map<String, Value>> = BTreeMap::new();
    for (position, item) in items.into_iter().enumerate() {
        let Value::Object(object) = item else {
            return Err(violation(format!("element {position} is not an object")));
        };
        let id = object
            .get("id")
            .and_then(Value::as_i64)
            .ok_or_else(|| violation(format!("element {position}: field `id` missing or not an integer")))?;
        if by_id.insert(id, object).is_some() {
            return Err(violation(format!("id {id} appears more than once")));
        }
    }

    let got: BTreeSet<i64> = by_id.keys().copied().collect();
    let missing: Vec<i64> = expected_ids.difference(&got).copied().collect();
    let extra: Vec<i64> = got.difference(expected_ids).copied().collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(LlmError::SchemaViolation {
            detail: format!("id coverage mismatch: missing {missing:?}, unexpected {extra:?}"),
            missing,
            extra,
        });
    }

    by_id
        .iter()
        .map(|(&id, object)| {
            R::from_object(id, object).map_err(|field| {
                violation(format!("id {id}: field `{field}` missing or of the wrong type"))
            })
        })
        .collect()
}
