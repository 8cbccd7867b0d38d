//! Chat-completions style remote model client.
//!
//! The request body is an opaque JSON template and the reply is located by
//! a JSON pointer, so any single request/response endpoint can be plugged
//! in. The HTTP layer sits behind [`Transport`] so tests can swap it out.

use std::time::Duration;

use serde_json::{json, Value};

use super::backend::{BackendConfig, BackendError, Completion};

pub const DEFAULT_RESPONSE_POINTER: &str = "/choices/0/message/content";

pub fn default_request_template() -> Value {
    json!({
        "model": "{{model}}",
        "messages": [{ "role": "user", "content": "{{prompt}}" }],
        "stream": false
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HttpRequest {
    pub url: String,
    pub bearer: Option<String>,
    pub body: Value,
    pub timeout: Duration,
}

/// One JSON POST, one JSON reply. Implementations must honour `timeout`.
pub trait Transport: Send + Sync {
    fn send(&self, request: &HttpRequest) -> Result<Value, BackendError>;
}

#[derive(Debug, Clone)]
pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new() -> Result<Self, BackendError> {
        let client = reqwest::blocking::Client::builder()
            .build()
            .map_err(|e| BackendError::Config(e.to_string()))?;
        Ok(HttpTransport { client })
    }
}

impl Transport for HttpTransport {
    fn send(&self, request: &HttpRequest) -> Result<Value, BackendError> {
        let timeout_ms = request.timeout.as_millis() as u64;
        let mut builder = self
            .client
            .post(&request.url)
            .timeout(request.timeout)
            .json(&request.body);
        if let Some(key) = &request.bearer {
            builder = builder.bearer_auth(key);
        }
        let response = builder.send().map_err(|e| {
            if e.is_timeout() {
                BackendError::Timeout(timeout_ms)
            } else {
                BackendError::Transport(e.to_string())
            }
        })?;
        let status = response.status();
        let text = response.text().map_err(|e| {
            if e.is_timeout() {
                BackendError::Timeout(timeout_ms)
            } else {
                BackendError::Transport(e.to_string())
            }
        })?;
        if !status.is_success() {
            return Err(BackendError::Transport(format!("HTTP {status}: {text}")));
        }
        serde_json::from_str(&text).map_err(|_| BackendError::BadResponse(text))
    }
}

/// Remote large-multimodal-model backend.
pub struct RemoteLmm<T: Transport = HttpTransport> {
    config: BackendConfig,
    transport: T,
}

impl<T: Transport> RemoteLmm<T> {
    pub fn new(config: BackendConfig, transport: T) -> Result<Self, BackendError> {
        config.validate()?;
        if config.endpoint_url.is_none() {
            return Err(BackendError::Config(
                "remote backend requires endpoint_url".into(),
            ));
        }
        Ok(RemoteLmm { config, transport })
    }

    fn api_key(&self) -> Result<Option<String>, BackendError> {
        match &self.config.api_key_env_var {
            None => Ok(None),
            Some(var) => std::env::var(var).map(Some).map_err(|_| {
                BackendError::Config(format!("environment variable {var} is not set"))
            }),
        }
    }

    pub fn build_request(&self, prompt: &str) -> Result<HttpRequest, BackendError> {
        let template = self
            .config
            .request_template
            .clone()
            .unwrap_or_else(default_request_template);
        let model = self.config.model_name.clone().unwrap_or_default();
        Ok(HttpRequest {
            url: self.config.endpoint_url.clone().unwrap_or_default(),
            bearer: self.api_key()?,
            body: substitute(template, prompt, &model),
            timeout: self.config.timeout(),
        })
    }

    fn extract(&self, body: &Value) -> Result<String, BackendError> {
        let pointer = self
            .config
            .response_pointer
            .as_deref()
            .unwrap_or(DEFAULT_RESPONSE_POINTER);
        body.pointer(pointer)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| BackendError::BadResponse(body.to_string()))
    }
}

fn substitute(value: Value, prompt: &str, model: &str) -> Value {
    match value {
        Value::String(s) => {
            Value::String(s.replace("{{prompt}}", prompt).replace("{{model}}", model))
        }
        Value::Array(items) => Value::Array(
            items
                .into_iter()
                .map(|v| substitute(v, prompt, model))
                .collect(),
        ),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, substitute(v, prompt, model)))
                .collect(),
        ),
        other => other,
    }
}

impl<T: Transport> Completion for RemoteLmm<T> {
    /// Sends the prompt, retrying once on timeout or transport failure.
    fn complete(&self, prompt: &str) -> Result<String, BackendError> {
        let request = self.build_request(prompt)?;
        let body = match self.transport.send(&request) {
            Ok(body) => body,
            Err(BackendError::Timeout(_) | BackendError::Transport(_)) => {
                log::warn!("remote backend call failed; retrying once");
                self.transport.send(&request)?
            }
            Err(e) => return Err(e),
        };
        self.extract(&body)
    }

    fn name(&self) -> &str {
        self.config.model_name.as_deref().unwrap_or("remote")
    }
}
