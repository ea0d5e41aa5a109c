use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use cutscene_agent::{
    DirectorOutcome, Harness, LiveBackend, LiveConfig, Mcp, McpTransport, ModelBackend, ScriptedBackend,
};
use cutscene_core::canonical;
use cutscene_core::toolkit::Status;
use cutscene_core::trajectory;
use cutscene_server::client::HttpClient;
use serde_json::{json, Value};

use crate::config::{write_file, RunConfig};
use crate::serve::{self, ServeArgs, Transport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Scripted,
    Live,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// Scenario id, e.g. S2_001.
    pub scenario: String,
    /// Script of steps for the scripted backend; defaults to the
    /// scenario's reference trajectory.
    #[arg(long)]
    pub script: Option<PathBuf>,
    /// Talk to a running server at this base URL instead of an
    /// in-process one.
    #[arg(long)]
    pub remote: Option<String>,
    #[arg(long, value_enum, default_value = "scripted")]
    pub backend: Backend,
    /// Chat-completions endpoint for the live backend.
    #[arg(long, env = "CUTSCENE_ENDPOINT")]
    pub endpoint: Option<String>,
    #[arg(long, env = "CUTSCENE_MODEL")]
    pub model: Option<String>,
}

#[derive(Debug)]
pub struct Replay {
    pub outcome: DirectorOutcome,
    /// Canonical text of the final sequence, newline-terminated.
    pub snapshot: String,
}

impl Replay {
    pub fn summary(&self, scenario: &str) -> Value {
        let errors = self.outcome.trajectory.iter().filter(|c| c.status == Status::Error).count();
        json!({
            "scenario": scenario,
            "status": self.outcome.status,
            "turns_used": self.outcome.turns_used,
            "calls": self.outcome.trajectory.len(),
            "errors": errors,
        })
    }
}

fn backend(config: &RunConfig, args: &ReplayArgs) -> Result<Box<dyn ModelBackend>> {
    match args.backend {
        Backend::Scripted => {
            let scripted = match &args.script {
                Some(path) => ScriptedBackend::load(path)?,
                None => {
                    let bundle = config.scenario(&args.scenario)?;
                    ScriptedBackend::from_calls(bundle.gt_trajectory.iter().map(|c| (c.tool.as_str(), &c.args)))
                }
            };
            Ok(Box::new(scripted))
        }
        Backend::Live => {
            let (Some(endpoint), Some(model)) = (&args.endpoint, &args.model) else {
                bail!("the live backend needs --endpoint and --model");
            };
            Ok(Box::new(LiveBackend::new(LiveConfig {
                endpoint: endpoint.clone(),
                model: model.clone(),
                api_key_env: "CUTSCENE_API_KEY".into(),
                timeout_secs: 120,
                temperature: None,
            })?))
        }
    }
}

/// Run the director on a scenario's storyboard and capture the result.
pub fn replay(config: &RunConfig, args: &ReplayArgs) -> Result<Replay> {
    let bundle = config.scenario(&args.scenario)?;
    let mut backend = backend(config, args)?;
    let mut transport: Box<dyn McpTransport> = match &args.remote {
        Some(url) => Box::new(HttpClient::new(url)),
        None => Box::new(serve::handler(
            config,
            &ServeArgs {
                transport: Transport::Stdio,
                listen: ([127, 0, 0, 1], 0).into(),
                project_context: None,
                isolation: false,
            },
        )?),
    };
    let outcome = Harness::new(transport.as_mut(), config.harness_config())
        .run_director(&bundle.storyboard, backend.as_mut())
        .context("director run failed")?;
    let state = Mcp::new(transport.as_mut()).sequence_state(None)?;
    Ok(Replay {
        outcome,
        snapshot: canonical::to_pretty(&state) + "\n",
    })
}

pub fn run(config: &RunConfig, args: &ReplayArgs) -> Result<()> {
    let result = replay(config, args)?;
    write_file(&config.output_file("trajectory.json")?, &(trajectory::render(&result.outcome.trajectory) + "\n"))?;
    write_file(&config.output_file("snapshot.json")?, &result.snapshot)?;
    println!("{}", canonical::to_pretty(&result.summary(&args.scenario)));
    Ok(())
}
