use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use cutscene_bench::{aggregate, write_csv, ScenarioScores, SummaryRow};

use crate::config::{read_file, write_file, RunConfig};

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Directory searched recursively for `scores.json` files.
    pub reports_dir: PathBuf,
}

fn collect(dir: &Path, found: &mut Vec<PathBuf>) -> Result<()> {
    let entries = std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))?;
    for entry in entries {
        let path = entry?.path();
        if path.is_dir() {
            collect(&path, found)?;
        } else if path.file_name().is_some_and(|n| n == "scores.json") {
            found.push(path);
        }
    }
    Ok(())
}

/// Every `scores.json` under `dir`, in path order.
pub fn load_scores(dir: &Path) -> Result<Vec<ScenarioScores>> {
    let mut paths = Vec::new();
    collect(dir, &mut paths)?;
    paths.sort();
    if paths.is_empty() {
        bail!("no scores.json under {}", dir.display());
    }
    paths
        .iter()
        .map(|p| serde_json::from_str(&read_file(p)?).with_context(|| format!("parsing {}", p.display())))
        .collect()
}

/// Cells of one (model, tier) row, keyed by metric.
type TableRow<'a> = ((&'a str, &'a str), BTreeMap<&'a str, f64>);

/// One row per (model, tier) with a column per metric.
pub fn markdown(rows: &[SummaryRow]) -> String {
    let metrics: BTreeSet<&str> = rows.iter().map(|r| r.metric.as_str()).collect();
    let mut table: Vec<TableRow> = Vec::new();
    for r in rows {
        let key = (r.model.as_str(), r.tier.as_str());
        match table.iter_mut().find(|(k, _)| *k == key) {
            Some((_, cells)) => {
                cells.insert(&r.metric, r.value);
            }
            None => table.push((key, BTreeMap::from([(r.metric.as_str(), r.value)]))),
        }
    }
    let mut out = format!("| model | tier | {} |\n", metrics.iter().copied().collect::<Vec<_>>().join(" | "));
    out += &format!("|---|---|{}\n", "---|".repeat(metrics.len()));
    for ((model, tier), cells) in &table {
        let values: Vec<String> = metrics
            .iter()
            .map(|m| cells.get(m).map_or_else(String::new, |v| format!("{v:.4}")))
            .collect();
        out += &format!("| {model} | {tier} | {} |\n", values.join(" | "));
    }
    out
}

pub fn run(config: &RunConfig, args: &ReportArgs) -> Result<()> {
    let rows = aggregate(&load_scores(&args.reports_dir)?);
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    write_file(&config.output_file("summary.csv")?, &String::from_utf8(csv)?)?;
    let table = markdown(&rows);
    write_file(&config.output_file("summary.md")?, &table)?;
    print!("{table}");
    Ok(())
}
