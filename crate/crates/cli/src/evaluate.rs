use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use clap::Args;
use cutscene_bench::l3::{judge, JudgeConfig};
use cutscene_bench::{eval_l1, eval_l2, parse_l3_response, L1Report, L2Report, L3Report, ScenarioScores};
use cutscene_core::canonical;
use cutscene_core::trajectory;
use serde_json::{json, Value};

use crate::config::{read_file, write_file, RunConfig};

/// `metric=minimum`, e.g. `cc=0.9`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub metric: String,
    pub minimum: f64,
}

impl FromStr for Gate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (metric, minimum) = s.split_once('=').ok_or_else(|| format!("expected metric=minimum, got '{s}'"))?;
        let minimum: f64 = minimum.trim().parse().map_err(|_| format!("'{minimum}' is not a number"))?;
        Ok(Gate {
            metric: metric.trim().to_string(),
            minimum,
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>={}", self.metric, self.minimum)
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Scenario id, e.g. S2_001.
    #[arg(long)]
    pub scenario: String,
    #[arg(long)]
    pub trajectory: PathBuf,
    /// Final sequence document; without it the structural layer is skipped.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    /// Model name recorded in the scores.
    #[arg(long, default_value = "unknown")]
    pub model: String,
    /// A judge verdict saved earlier, scored offline.
    #[arg(long, conflicts_with = "video_url")]
    pub judge_response: Option<PathBuf>,
    /// Rendered video to send to the live judge.
    #[arg(long, requires_all = ["judge_endpoint", "judge_model"])]
    pub video_url: Option<String>,
    #[arg(long, env = "CUTSCENE_JUDGE_ENDPOINT")]
    pub judge_endpoint: Option<String>,
    #[arg(long, env = "CUTSCENE_JUDGE_MODEL")]
    pub judge_model: Option<String>,
    /// Fail with exit code 2 if a metric is below a minimum. Repeatable.
    #[arg(long = "gate")]
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub l1: L1Report,
    pub l2: Option<L2Report>,
    pub l3: Option<L3Report>,
    pub scores: ScenarioScores,
    pub notes: Vec<String>,
    pub failed_gates: Vec<Gate>,
}

impl Evaluation {
    pub fn summary(&self) -> Value {
        json!({
            "model": self.scores.model,
            "scenario": self.scores.scenario,
            "tier": self.scores.tier,
            "metrics": self.scores.metrics,
            "notes": self.notes,
            "failed_gates": self.failed_gates.iter().map(Gate::to_string).collect::<Vec<_>>(),
        })
    }
}

fn metrics(l1: &L1Report, l2: Option<&L2Report>, l3: Option<&L3Report>) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    for (k, v) in [("tsa", l1.tsa), ("pv", l1.pv), ("cc", l1.cc), ("ce", l1.ce), ("dc", l1.dc)] {
        m.insert(k.to_string(), v);
    }
    if let Some(l2) = l2 {
        for (k, v) in [("tc", l2.tc), ("camc", l2.camc), ("tempc", l2.tempc)] {
            m.insert(k.to_string(), v);
        }
    }
    if let Some(l3) = l3 {
        for (k, v) in l3.scores() {
            m.insert(format!("l3_{k}"), v as f64);
        }
        m.insert("l3_total".into(), l3.total as f64);
    }
    m
}

pub fn evaluate(config: &RunConfig, args: &EvaluateArgs) -> Result<Evaluation> {
    let bundle = config.scenario(&args.scenario)?;
    let calls = trajectory::parse(&read_file(&args.trajectory)?)
        .with_context(|| format!("parsing {}", args.trajectory.display()))?;
    let mut notes = Vec::new();

    let l1 = eval_l1(&calls, &bundle, config.toolkit()?);
    let l2 = match &args.snapshot {
        Some(path) => {
            let doc: Value = serde_json::from_str(&read_file(path)?).with_context(|| format!("parsing {}", path.display()))?;
            Some(eval_l2(&doc, &bundle.expected_tracks, config.epsilon, config.delta)?)
        }
        None => {
            notes.push("l2 skipped: no snapshot given".to_string());
            None
        }
    };
    let l3 = if let Some(path) = &args.judge_response {
        Some(parse_l3_response(&read_file(path)?).with_context(|| format!("judge response {}", path.display()))?)
    } else if let Some(video) = &args.video_url {
        let judge_config = JudgeConfig {
            endpoint: args.judge_endpoint.clone().unwrap_or_default(),
            model: args.judge_model.clone().unwrap_or_default(),
            api_key_env: "CUTSCENE_JUDGE_KEY".into(),
        };
        Some(judge(&judge_config, &bundle.storyboard, video)?)
    } else {
        notes.push("l3 skipped: no judge response".to_string());
        None
    };

    let metrics = metrics(&l1, l2.as_ref(), l3.as_ref());
    let mut failed_gates = Vec::new();
    for gate in &args.gates {
        let value = metrics
            .get(&gate.metric)
            .ok_or_else(|| anyhow!("gate on '{}', which this run did not compute", gate.metric))?;
        if *value < gate.minimum {
            failed_gates.push(gate.clone());
        }
    }
    Ok(Evaluation {
        scores: ScenarioScores {
            model: args.model.clone(),
            scenario: bundle.id.clone(),
            tier: bundle.tier,
            metrics,
        },
        l1,
        l2,
        l3,
        notes,
        failed_gates,
    })
}

fn to_text(value: serde_json::Result<Value>) -> Result<String> {
    Ok(canonical::to_pretty(&value?) + "\n")
}

/// Write the reports; returns whether every gate passed.
pub fn run(config: &RunConfig, args: &EvaluateArgs) -> Result<bool> {
    let eval = evaluate(config, args)?;
    // Skipped layers must not leave an older run's report behind.
    for stale in ["l2_report.json", "l3_report.json"] {
        let _ = std::fs::remove_file(config.output_file(stale)?);
    }
    write_file(&config.output_file("l1_report.json")?, &to_text(serde_json::to_value(&eval.l1))?)?;
    if let Some(l2) = &eval.l2 {
        write_file(&config.output_file("l2_report.json")?, &to_text(serde_json::to_value(l2))?)?;
    }
    if let Some(l3) = &eval.l3 {
        write_file(&config.output_file("l3_report.json")?, &to_text(serde_json::to_value(l3))?)?;
    }
    write_file(&config.output_file("scores.json")?, &to_text(serde_json::to_value(&eval.scores))?)?;
    for note in &eval.notes {
        eprintln!("note: {note}");
    }
    println!("{}", canonical::to_pretty(&eval.summary()));
    if eval.failed_gates.is_empty() {
        Ok(true)
    } else {
        for gate in &eval.failed_gates {
            eprintln!("gate failed: {gate} (got {})", eval.scores.metrics[&gate.metric]);
        }
        Ok(false)
    }
}
