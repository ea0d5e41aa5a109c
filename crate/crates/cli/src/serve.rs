use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use cutscene_core::assets::AssetRegistry;
use cutscene_core::toolkit::Toolkit;
use cutscene_server::{http, spawn, stdio, RpcHandler, ServerConfig, ToolkitFactory};

use crate::config::{read_file, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transport {
    Stdio,
    Http,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[arg(long, value_enum, default_value = "stdio")]
    pub transport: Transport,
    /// Listen address for the HTTP transport; port 0 picks a free port.
    #[arg(long, default_value = "127.0.0.1:8731")]
    pub listen: SocketAddr,
    /// File whose text is served by `prompts/project_context`.
    #[arg(long)]
    pub project_context: Option<PathBuf>,
    /// Allow sessions with their own private sequence.
    #[arg(long)]
    pub isolation: bool,
}

/// Build the handler `serve` would use, without starting a transport.
pub fn handler(config: &RunConfig, args: &ServeArgs) -> Result<RpcHandler> {
    let assets = config.assets()?;
    let toolkit_config = config.toolkit_config();
    let project_context = match &args.project_context {
        Some(path) => read_file(path)?,
        None => String::new(),
    };
    let factory: Option<ToolkitFactory> = if args.isolation {
        // Isolated sessions get a fresh registry; the workbook already loaded once.
        let (dir, toolkit_config) = (config.workbook_dir.clone(), toolkit_config.clone());
        Some(Arc::new(move || {
            let assets = AssetRegistry::from_workbook(&dir).expect("workbook loaded at startup");
            Toolkit::new(assets, toolkit_config.clone())
        }))
    } else {
        None
    };
    let exec = spawn(Toolkit::new(assets, toolkit_config), factory);
    Ok(RpcHandler::new(exec, ServerConfig { project_context }))
}

pub fn run(config: &RunConfig, args: &ServeArgs) -> Result<()> {
    let handler = handler(config, args)?;
    match args.transport {
        Transport::Stdio => {
            let stdin = std::io::stdin();
            stdio::serve(&handler, stdin.lock(), std::io::stdout().lock()).context("stdio transport")
        }
        Transport::Http => {
            let runtime = tokio::runtime::Runtime::new().context("starting runtime")?;
            runtime
                .block_on(http::serve(handler, args.listen, |addr| {
                    eprintln!("listening on http://{addr}");
                }))
                .with_context(|| format!("serving on {}", args.listen))
        }
    }
}
