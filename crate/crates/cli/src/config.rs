//! Settings shared by every subcommand.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use cutscene_agent::HarnessConfig;
use cutscene_bench::{ScenarioBundle, DEFAULT_DELTA};
use cutscene_core::assets::AssetRegistry;
use cutscene_core::toolkit::{Toolkit, ToolkitConfig};

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Directory holding the asset workbook sheets.
    #[arg(long, global = true, env = "CUTSCENE_WORKBOOK", default_value = "data/workbook")]
    pub workbook_dir: PathBuf,
    /// Directory holding one subdirectory per scenario bundle.
    #[arg(long, global = true, env = "CUTSCENE_SCENARIOS", default_value = "data/scenarios")]
    pub scenario_dir: PathBuf,
    #[arg(long, global = true, default_value_t = 30)]
    pub frame_rate: u32,
    /// Overlap tolerance in seconds; one frame when omitted.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Audio/facial alignment tolerance in seconds.
    #[arg(long, global = true, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    /// Tool calls kept verbatim when compressing history.
    #[arg(long, global = true, default_value_t = 5)]
    pub keep_recent_n: usize,
    /// Token budget of the director's system prompt.
    #[arg(long, global = true, default_value_t = 8000)]
    pub token_budget: usize,
    #[arg(long, short = 'o', global = true, default_value = "out")]
    pub output_dir: PathBuf,
}

impl RunConfig {
    /// Reject non-positive numbers up front.
    pub fn validate(&self) -> Result<()> {
        if self.frame_rate == 0 {
            bail!("--frame-rate must be positive");
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e.is_finite()) {
                bail!("--epsilon must be positive");
            }
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            bail!("--delta must be positive");
        }
        if self.keep_recent_n == 0 || self.token_budget == 0 {
            bail!("--keep-recent-n and --token-budget must be positive");
        }
        Ok(())
    }

    pub fn toolkit_config(&self) -> ToolkitConfig {
        ToolkitConfig {
            frame_rate: self.frame_rate,
            ..ToolkitConfig::default()
        }
    }

    pub fn harness_config(&self) -> HarnessConfig {
        HarnessConfig {
            token_budget: self.token_budget,
            keep_recent: self.keep_recent_n,
            ..HarnessConfig::default()
        }
    }

    pub fn assets(&self) -> Result<AssetRegistry> {
        if !self.workbook_dir.is_dir() {
            bail!("workbook directory {} does not exist", self.workbook_dir.display());
        }
        AssetRegistry::from_workbook(&self.workbook_dir)
            .with_context(|| format!("loading workbook {}", self.workbook_dir.display()))
    }

    pub fn toolkit(&self) -> Result<Toolkit> {
        Ok(Toolkit::new(self.assets()?, self.toolkit_config()))
    }

    pub fn scenario(&self, id: &str) -> Result<ScenarioBundle> {
        if !self.scenario_dir.is_dir() {
            bail!("scenario directory {} does not exist", self.scenario_dir.display());
        }
        Ok(ScenarioBundle::load_by_id(&self.scenario_dir, id)?)
    }

    pub fn output_file(&self, name: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.output_dir)
            .with_context(|| format!("creating {}", self.output_dir.display()))?;
        Ok(self.output_dir.join(name))
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}
