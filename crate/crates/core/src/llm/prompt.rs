use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::LlmError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TemplateId {
    WpaAnalysis,
    WpaTransform,
    ScoreAdjust,
}

impl TemplateId {
    pub const ALL: [TemplateId; 3] = [
        TemplateId::WpaAnalysis,
        TemplateId::WpaTransform,
        TemplateId::ScoreAdjust,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            TemplateId::WpaAnalysis => "wpa_analysis.txt",
            TemplateId::WpaTransform => "wpa_transform.txt",
            TemplateId::ScoreAdjust => "score_adjust.txt",
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_name())
    }
}

/// Prompt templates with `{{name}}` placeholders.
#[derive(Debug, Clone, Default)]
pub struct PromptLibrary {
    templates: BTreeMap<TemplateId, String>,
}

impl PromptLibrary {
    /// Copies compiled into the binary from the crate's `prompts/` directory.
    pub fn bundled() -> PromptLibrary {
        let mut library = PromptLibrary::default();
        library.insert(TemplateId::WpaAnalysis, include_str!("../../prompts/wpa_analysis.txt"));
        library.insert(TemplateId::WpaTransform, include_str!("../../prompts/wpa_transform.txt"));
        library.insert(TemplateId::ScoreAdjust, include_str!("../../prompts/score_adjust.txt"));
        library
    }

    /// Reads every template file present in `dir`. Absent files surface as
    /// `MissingTemplate` when rendered.
    pub fn load(dir: impl AsRef<Path>) -> Result<PromptLibrary, LlmError> {
        let dir = dir.as_ref();
        if !dir.is_dir() {
            return Err(LlmError::MissingTemplate(format!(
                "prompt directory {} not found",
                dir.display()
            )));
        }
        let mut library = PromptLibrary::default();
        for id in TemplateId::ALL {
            let path = dir.join(id.file_name());
            if path.is_file() {
                let text = fs::read_to_string(&path).map_err(|e| {
                    LlmError::MissingTemplate(format!("{}: {e}", path.display()))
                })?;
                library.insert(id, text);
            }
        }
        Ok(library)
    }

    pub fn insert(&mut self, id: TemplateId, text: impl Into<String>) {
        self.templates.insert(id, text.into());
    }

    pub fn get(&self, id: TemplateId) -> Option<&str> {
        self.templates.get(&id).map(String::as_str)
    }

    pub fn render(&self, id: TemplateId, payload: &Map<String, Value>) -> Result<String, LlmError> {
        let template = self
            .get(id)
            .ok_or_else(|| LlmError::MissingTemplate(id.file_name().to_string()))?;
        substitute(template, payload)
    }
}

fn render_value(value: &Value) -> String {
    match value {
        Value::Array(items) if !items.is_empty() => {
            serde_json::to_string_pretty(value).expect("json value serializes")
        }
        _ => value.to_string(),
    }
}

/// Replaces every `{{name}}` with the JSON encoding of `payload[name]`.
/// Inserted text is not rescanned.
pub fn substitute(template: &str, payload: &Map<String, Value>) -> Result<String, LlmError> {
    let mut out = String::with_capacity(template.len());
    let mut unresolved: Vec<String> = Vec::new();
    let mut rest = template;
    while let Some(start) = rest.find("{{") {
        out.push_str(&rest[..start]);
        let after_open = &rest[start + 2..];
        let Some(end) = after_open.find("}}") else {
            out.push_str(&rest[start..]);
            rest = "";
            break;
        };
        let name = after_open[..end].trim();
        match payload.get(name) {
            Some(value) => out.push_str(&render_value(value)),
            None => {
                if !unresolved.iter().any(|n| n == name) {
                    unresolved.push(name.to_string());
                }
            }
        }
        rest = &after_open[end + 2..];
    }
    out.push_str(rest);
    if unresolved.is_empty() {
        Ok(out)
    } else {
        Err(LlmError::UnresolvedPlaceholder(unresolved))
    }
}

/// Renders one of the bundled-or-loaded templates.
pub fn render_prompt(
    library: &PromptLibrary,
    template: TemplateId,
    payload: &Map<String, Value>,
) -> Result<String, LlmError> {
    library.render(template, payload)
}
