//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 success, 1 replay with failed expectations, 2 invalid input
//! or configuration, 3 backend failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use proactive_core::adaptation::{gate_inputs, policy_table};
use proactive_core::context::{ContextVariant, SiidFlags};
use proactive_core::dataset::{compare_with_reference, compute_stats, load_dataset};
use proactive_core::gestures::synth::option_targets;
use proactive_core::gestures::{recognize, GazeTarget, SensorTrace};
use proactive_core::recommendation::{BackendKind, PresentationModality, QueryType};
use proactive_core::simulator::{bundled_suite_dir, load_suite, run_suite};

use crate::engine::{AppConfig, ContextInput, Engine, EngineError};
use crate::wire::{encode_versioned, SuggestReply};

pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_BACKEND: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "proactive", version, about = "Proactive AR assistant engine")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Rule,
    Remote,
}

#[derive(Debug, Args)]
pub struct BackendArgs {
    /// Overrides the backend kind from the config file.
    #[arg(long, value_enum)]
    pub backend: Option<BackendChoice>,
    /// JSON file with `backend`, `recognizer`, `gating` and `exemplars` sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl BackendArgs {
    fn app_config(&self) -> Result<AppConfig, EngineError> {
        let cfg = match &self.config {
            Some(path) => AppConfig::load(path)?,
            None => AppConfig::default(),
        };
        Ok(cfg.with_backend_kind(self.backend.map(|b| match b {
            BackendChoice::Rule => BackendKind::RuleBased,
            BackendChoice::Remote => BackendKind::RemoteLmm,
        })))
    }

    fn engine(&self) -> Result<Engine, EngineError> {
        Engine::from_config(&self.app_config()?)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the suggestion and interaction plan for one context.
    Suggest {
        /// Context snapshot JSON file (`-` for stdin).
        snapshot: Option<PathBuf>,
        /// Free-text scene description instead of a snapshot.
        #[arg(long, conflicts_with = "snapshot")]
        scene: Option<String>,
        /// Extra context variants that the snapshot cannot express.
        #[arg(long = "variant", value_parser = parse_vocab::<ContextVariant>)]
        variants: Vec<ContextVariant>,
        /// Ignore unknown snapshot keys.
        #[arg(long)]
        lenient: bool,
        /// Write the assembled prompt to PATH, or to stderr without one.
        #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
        dump_prompt: Option<PathBuf>,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Replay a scenario suite and check its expectations.
    Replay {
        /// Suite directory; the bundled suite when omitted.
        dir: Option<PathBuf>,
        /// Print the full summary as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Aggregate statistics for an annotation CSV.
    Stats {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the recognizers over a recorded sensor trace.
    GestureEval {
        /// JSONL trace file.
        trace: PathBuf,
        #[arg(long, value_parser = parse_vocab::<QueryType>)]
        prompt: QueryType,
        /// Presentation of the prompt; audio-only disables gaze.
        #[arg(long, value_parser = parse_vocab::<PresentationModality>, default_value = "audio_visual")]
        presentation: PresentationModality,
        /// Answer window in milliseconds.
        #[arg(long)]
        deadline_ms: Option<u64>,
        /// Gaze targets JSON file; the standard layout for the prompt when omitted.
        #[arg(long)]
        targets: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// JSON file with a `recognizer` section.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the adaptation policy table as JSON.
    Policy,
    /// Run the local HTTP and WebSocket service.
    Serve {
        #[arg(long, default_value_t = 8787)]
        port: u16,
        /// Scenario suite offered to clients; the bundled suite when omitted.
        #[arg(long)]
        scenarios: Option<PathBuf>,
        #[command(flatten)]
        backend: BackendArgs,
    },
}

fn parse_vocab<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(EngineError::Backend(_)) => EXIT_BACKEND,
            _ => EXIT_INVALID,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Engine(EngineError::Invalid(e.to_string()))
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("output always serializes")
}

/// Runs a parsed command, writing results to `out`. Returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Suggest {
            snapshot,
            scene,
            variants,
            lenient,
            dump_prompt,
            backend,
        } => {
            let engine = backend.engine()?;
            let snapshot = match &snapshot {
                Some(path) => Some(serde_json::from_str(&read_input(path)?).map_err(invalid)?),
                None => None,
            };
            let input = ContextInput {
                snapshot,
                scene,
                extra_variants: variants,
                lenient,
                ..ContextInput::default()
            };
            let situation = engine.situation(&input)?;
            if let Some(target) = dump_prompt {
                let (bundle, short_pool) = engine
                    .recommender
                    .prompt(&situation)
                    .map_err(EngineError::from)?;
                if short_pool {
                    log::warn!("exemplar pool is smaller than the requested number of shots");
                }
                let text = bundle.render();
                if target == Path::new("-") {
                    eprintln!("{text}");
                } else {
                    std::fs::write(&target, text)?;
                }
            }
            let (suggestion, plan) = engine.suggest(&situation)?;
            writeln!(
                out,
                "{}",
                pretty(&encode_versioned(&SuggestReply { suggestion, plan }))
            )?;
            Ok(0)
        }
        Command::Replay { dir, json, backend } => {
            let engine = backend.engine()?;
            let dir = dir.unwrap_or_else(bundled_suite_dir);
            let scenarios = load_suite(&dir).map_err(invalid)?;
            let summary =
                run_suite(&scenarios, &engine.recommender, &engine.sim).map_err(invalid)?;
            if json {
                writeln!(out, "{}", pretty(&summary))?;
            } else {
                write!(out, "{}", summary.render_text())?;
            }
            Ok(if summary.all_passed() { 0 } else { EXIT_FAILED })
        }
        Command::Stats { path, json } => {
            let entries = load_dataset(&path).map_err(invalid)?;
            let report = compute_stats(&entries).map_err(invalid)?;
            let notes = compare_with_reference(&report);
            if json {
                writeln!(
                    out,
                    "{}",
                    pretty(&serde_json::json!({ "report": report, "notes": notes }))
                )?;
            } else {
                write!(out, "{}", report.render_text())?;
                if !notes.is_empty() {
                    writeln!(out, "\nnotes")?;
                    for note in notes {
                        writeln!(out, "  {note}")?;
                    }
                }
            }
            Ok(0)
        }
        Command::GestureEval {
            trace,
            prompt,
            presentation,
            deadline_ms,
            targets,
            json,
            config,
        } => {
            let recognizer = match &config {
                Some(path) => AppConfig::load(path)?.recognizer,
                None => Default::default(),
            };
            let trace = SensorTrace::load(&trace).map_err(invalid)?;
            let targets: Vec<GazeTarget> = match &targets {
                Some(path) => serde_json::from_str(&read_input(path)?).map_err(invalid)?,
                None => option_targets(prompt),
            };
            let plan = gate_inputs(SiidFlags::default(), presentation, prompt);
            let recognition = recognize(
                &trace,
                &targets,
                &plan,
                &recognizer,
                deadline_ms.unwrap_or(u64::MAX),
            );
            if json {
                let body = serde_json::json!({
                    "decision": recognition.decision.as_ref().ok(),
                    "timeout": recognition.decision.as_ref().err(),
                    "candidates": recognition.candidates,
                });
                writeln!(out, "{}", pretty(&body))?;
            } else {
                match &recognition.decision {
                    Ok(input) => writeln!(out, "{}", input.value.as_str().to_uppercase())?,
                    Err(_) => writeln!(out, "TIMEOUT")?,
                }
                for c in &recognition.candidates {
                    writeln!(
                        out,
                        "  {:<14}{:<14}{:>8} ms",
                        c.modality.as_str(),
                        c.value.as_str(),
                        c.t
                    )?;
                }
            }
            Ok(0)
        }
        Command::Policy => {
            writeln!(
                out,
                "{}",
                pretty(&encode_versioned(
                    &serde_json::json!({ "policy": policy_table() })
                ))
            )?;
            Ok(0)
        }
        Command::Serve {
            port,
            scenarios,
            backend,
        } => {
            let dir = scenarios.unwrap_or_else(bundled_suite_dir);
            let engine = backend
                .engine()?
                .with_scenarios(load_suite(&dir).map_err(invalid)?);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(crate::service::serve(Arc::new(engine), port, |addr| {
                eprintln!("listening on http://{addr}");
            }))?;
            Ok(0)
        }
    }
}

/// Parses `args`, runs the command and reports errors on stderr.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(cli, &mut out) {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
