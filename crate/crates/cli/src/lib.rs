//! Command-line front end and local service for the proactive assistant
//! engine.
//!
//! The `proactive` binary wraps the engine in subcommands (`suggest`,
//! `replay`, `stats`, `gesture-eval`, `policy`, `serve`). `serve` exposes the
//! same operations over HTTP plus a WebSocket session protocol in which the
//! server pushes prompts and the client answers with recognized inputs or
//! raw sensor samples. Every JSON body on the wire carries `"v": 1`.

pub mod cli;
pub mod engine;
pub mod service;
pub mod session;
pub mod wire;

pub use cli::{run, Cli};
pub use engine::{AppConfig, Engine, EngineError};
