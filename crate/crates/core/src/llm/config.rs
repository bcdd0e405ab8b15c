use serde::{Deserialize, Serialize};

use super::LlmError;

pub const DEFAULT_TEMPERATURE: f64 = 0.0;
pub const DEFAULT_TOP_P: f64 = 0.1;
pub const DEFAULT_MAX_TOKENS: u32 = 10_000;
pub const DEFAULT_BATCH_SIZE: usize = 40;

/// Sampling and transport settings sent with every model request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LLMRequestConfig {
    pub temperature: f64,
    pub top_p: f64,
    pub max_tokens: u32,
    pub model_name: String,
    /// Chat-completion URL. `LLM_ENDPOINT` overrides an empty value.
    pub endpoint: String,
    pub timeout_ms: u64,
    pub max_retries: u32,
    /// Concurrent requests allowed against the HTTP backend.
    pub max_in_flight: usize,
    /// Plays per scoring request.
    pub batch_size: usize,
}

impl Default for LLMRequestConfig {
    fn default() -> Self {
        LLMRequestConfig {
            temperature: DEFAULT_TEMPERATURE,
            top_p: DEFAULT_TOP_P,
            max_tokens: DEFAULT_MAX_TOKENS,
            model_name: "gpt-4o".to_string(),
            endpoint: String::new(),
            timeout_ms: 120_000,
            max_retries: 2,
            max_in_flight: 4,
            batch_size: DEFAULT_BATCH_SIZE,
        }
    }
}

impl LLMRequestConfig {
    pub fn validate(&self) -> Result<(), LlmError> {
        let problem = if !(self.temperature >= 0.0) {
            Some(format!("temperature must be >= 0, got {}", self.temperature))
        } else if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            Some(format!("top_p must be in (0, 1], got {}", self.top_p))
        } else if self.max_tokens == 0 {
            Some("max_tokens must be at least 1".to_string())
        } else if self.max_in_flight == 0 {
            Some("max_in_flight must be at least 1".to_string())
        } else if self.batch_size == 0 {
            Some("batch_size must be at least 1".to_string())
        } else {
            None
        };
        match problem {
            Some(p) => Err(LlmError::InvalidConfig(p)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    HttpChatCompletion,
    DeterministicMock,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = LLMRequestConfig::default();
        assert_eq!(c.temperature, 0.0);
        assert_eq!(c.top_p, 0.1);
        assert_eq!(c.max_tokens, 10_000);
        assert_eq!(c.max_retries, 2);
        assert_eq!(c.batch_size, 40);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        for bad in [
            LLMRequestConfig { temperature: -0.1, ..Default::default() },
            LLMRequestConfig { temperature: f64::NAN, ..Default::default() },
            LLMRequestConfig { top_p: 0.0, ..Default::default() },
            LLMRequestConfig { top_p: 1.5, ..Default::default() },
            LLMRequestConfig { max_tokens: 0, ..Default::default() },
        ] {
            assert!(matches!(bad.validate(), Err(LlmError::InvalidConfig(_))));
        }
    }
}
