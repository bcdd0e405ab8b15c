//! Chat-completion client for OpenAI-style endpoints.

use std::time::Duration;

use serde_json::{json, Value};

use super::{Backend, BackendKind, CompletionRequest, LLMRequestConfig, LlmError};

pub const ENDPOINT_ENV: &str = "LLM_ENDPOINT";
pub const API_KEY_ENV: &str = "LLM_API_KEY";

const BACKOFF_BASE_MS: u64 = 250;

#[derive(Debug)]
pub struct HttpBackend {
    client: reqwest::blocking::Client,
    endpoint: String,
    api_key: Option<String>,
    transport_retries: u32,
}

/// Request body for one prompt.
pub fn request_body(request: &CompletionRequest) -> Value {
    let config = &request.config;
    json!({
        "model": config.model_name,
        "messages": [{ "role": "user", "content": request.prompt }],
        "temperature": config.temperature,
        "top_p": config.top_p,
        "max_tokens": config.max_tokens,
    })
}

fn reply_content(body: &Value) -> Option<String> {
    body.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_owned)
}

impl HttpBackend {
    pub fn new(
        endpoint: impl Into<String>,
        api_key: Option<String>,
        config: &LLMRequestConfig,
    ) -> Result<HttpBackend, LlmError> {
        let endpoint = endpoint.into();
        if endpoint.trim().is_empty() {
            return Err(LlmError::InvalidConfig(format!(
                "no endpoint configured; set {ENDPOINT_ENV} or llm.endpoint"
            )));
        }
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_millis(config.timeout_ms))
            .build()
            .map_err(|e| LlmError::BackendUnavailable(e.to_string()))?;
        Ok(HttpBackend {
            client,
            endpoint,
            api_key,
            transport_retries: config.max_retries,
        })
    }

    /// Endpoint from `LLM_ENDPOINT` (falling back to the config), key from `LLM_API_KEY`.
    pub fn from_env(config: &LLMRequestConfig) -> Result<HttpBackend, LlmError> {
        let endpoint = std::env::var(ENDPOINT_ENV)
            .ok()
            .filter(|v| !v.trim().is_empty())
            .unwrap_or_else(|| config.endpoint.clone());
        let api_key = std::env::var(API_KEY_ENV).ok().filter(|v| !v.is_empty());
        HttpBackend::new(endpoint, api_key, config)
    }

    fn send_once(&self, body: &Value) -> Result<String, (bool, LlmError)> {
        let mut builder = self.client.post(&self.endpoint).json(body);
        if let Some(key) = &self.api_key {
            builder = builder.bearer_auth(key);
        }
        let response = builder
            .send()
            .map_err(|e| (true, LlmError::BackendUnavailable(e.to_string())))?;
        let status = response.status();
        if !status.is_success() {
            let transient = status.as_u16() == 429 || status.is_server_error();
            let text = response.text().unwrap_or_default();
            return Err((
                transient,
                LlmError::BackendUnavailable(format!("HTTP {status}: {text}")),
            ));
        }
        let body: Value = response
            .json()
            .map_err(|e| (false, LlmError::BackendUnavailable(format!("bad reply body: {e}"))))?;
        reply_content(&body).ok_or_else(|| {
            (
                false,
                LlmError::BackendUnavailable("reply has no choices[0].message.content".into()),
            )
        })
    }
}

impl Backend for HttpBackend {
    fn kind(&self) -> BackendKind {
        BackendKind::HttpChatCompletion
    }

    fn complete(&self, request: &CompletionRequest) -> Result<String, LlmError> {
        let body = request_body(request);
        let mut attempt = 0;
        loop {
            match self.send_once(&body) {
                Ok(content) => return Ok(content),
                Err((true, _)) if attempt < self.transport_retries => {
                    std::thread::sleep(Duration::from_millis(BACKOFF_BASE_MS << attempt));
                    attempt += 1;
                }
                Err((_, err)) => return Err(err),
            }
        }
    }
}
