//! Pluggable text-completion backends.
//!
//! [`Backend::RuleBased`] needs no model at all: suggestions come from the
//! deterministic policy table and responses from templates. Every other
//! backend implements [`Completion`]: a single prompt in, a single reply out.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::remote::{HttpTransport, RemoteLmm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackendError {
    #[error("backend timed out after {0} ms")]
    Timeout(u64),
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("unexpected backend response: {0}")]
    BadResponse(String),
    #[error("backend configuration: {0}")]
    Config(String),
}

/// A model that turns a prompt into a reply.
pub trait Completion: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, BackendError>;

    /// Short name for logs and reports.
    fn name(&self) -> &str {
        "model"
    }
}

#[derive(Clone, Default)]
pub enum Backend {
    #[default]
    RuleBased,
    Model(Arc<dyn Completion>),
}

impl fmt::Debug for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::RuleBased => f.write_str("RuleBased"),
            Backend::Model(m) => write!(f, "Model({})", m.name()),
        }
    }
}

impl Backend {
    pub fn model(completion: impl Completion + 'static) -> Self {
        Backend::Model(Arc::new(completion))
    }

    pub fn is_rule_based(&self) -> bool {
        matches!(self, Backend::RuleBased)
    }

    pub fn from_config(cfg: &BackendConfig) -> Result<Self, BackendError> {
        cfg.validate()?;
        match cfg.kind {
            BackendKind::RuleBased => Ok(Backend::RuleBased),
            BackendKind::RemoteLmm => Ok(Backend::model(RemoteLmm::new(
                cfg.clone(),
                HttpTransport::new()?,
            )?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    #[default]
    RuleBased,
    RemoteLmm,
}

fn default_timeout_ms() -> u64 {
    30_000
}

/// Backend settings as read from a config file or CLI flags. API keys are
/// never stored here, only the name of the environment variable holding one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendConfig {
    #[serde(default)]
    pub kind: BackendKind,
    #[serde(default)]
    pub endpoint_url: Option<String>,
    #[serde(default)]
    pub api_key_env_var: Option<String>,
    #[serde(default)]
    pub model_name: Option<String>,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
    /// Request body; string values `{{prompt}}` and `{{model}}` are substituted.
    #[serde(default)]
    pub request_template: Option<serde_json::Value>,
    /// JSON pointer to the reply text inside the response body.
    #[serde(default)]
    pub response_pointer: Option<String>,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            kind: BackendKind::RuleBased,
            endpoint_url: None,
            api_key_env_var: None,
            model_name: None,
            timeout_ms: default_timeout_ms(),
            request_template: None,
            response_pointer: None,
        }
    }
}

impl BackendConfig {
    pub fn validate(&self) -> Result<(), BackendError> {
        if self.kind == BackendKind::RemoteLmm {
            if self
                .endpoint_url
                .as_deref()
                .is_none_or(|u| u.trim().is_empty())
            {
                return Err(BackendError::Config(
                    "remote backend requires endpoint_url".into(),
                ));
            }
            if self.timeout_ms == 0 {
                return Err(BackendError::Config("timeout_ms must be > 0".into()));
            }
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self, BackendError> {
        let cfg: BackendConfig =
            serde_json::from_str(text).map_err(|e| BackendError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }
}

/// Canned replies for tests and latency calibration. Replies cycle in order;
/// each call sleeps for `delay` first.
#[derive(Debug)]
pub struct CannedCompletion {
    replies: Vec<Result<String, BackendError>>,
    delay: Duration,
    next: AtomicUsize,
}

impl CannedCompletion {
    pub fn new(replies: Vec<Result<String, BackendError>>) -> Self {
        assert!(
            !replies.is_empty(),
            "CannedCompletion needs at least one reply"
        );
        CannedCompletion {
            replies,
            delay: Duration::ZERO,
            next: AtomicUsize::new(0),
        }
    }

    pub fn fixed(reply: impl Into<String>) -> Self {
        Self::new(vec![Ok(reply.into())])
    }

    pub fn failing(err: BackendError) -> Self {
        Self::new(vec![Err(err)])
    }

    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.delay = delay;
        self
    }

    pub fn calls(&self) -> usize {
        self.next.load(Ordering::SeqCst)
    }
}

impl Completion for CannedCompletion {
    fn complete(&self, _prompt: &str) -> Result<String, BackendError> {
        if !self.delay.is_zero() {
            std::thread::sleep(self.delay);
        }
        let i = self.next.fetch_add(1, Ordering::SeqCst) % self.replies.len();
        self.replies[i].clone()
    }

    fn name(&self) -> &str {
        "canned"
    }
}
