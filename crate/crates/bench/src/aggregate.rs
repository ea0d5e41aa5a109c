//! Per-model summaries: metric means overall and per tier, plus the
//! S5 minus S1 delta.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::scenario::Tier;

/// Metric values for one (model, scenario) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioScores {
    pub model: String,
    pub scenario: String,
    pub tier: Tier,
    pub metrics: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub model: String,
    /// `all`, a tier name, or `DELTA` (S5 mean minus S1 mean).
    pub tier: String,
    pub metric: String,
    pub value: f64,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Rows sorted by model, then `all`, tiers, `DELTA`, then metric. A
/// metric only gets a tier row if some run of that tier reported it, and a
/// delta only if both S1 and S5 did.
pub fn aggregate(scores: &[ScenarioScores]) -> Vec<SummaryRow> {
    // model -> metric -> tier -> values
    let mut grouped: BTreeMap<&str, BTreeMap<&str, BTreeMap<Tier, Vec<f64>>>> = BTreeMap::new();
    for s in scores {
        for (metric, value) in &s.metrics {
            grouped
                .entry(s.model.as_str())
                .or_default()
                .entry(metric.as_str())
                .or_default()
                .entry(s.tier)
                .or_default()
                .push(*value);
        }
    }
    let mut rows = Vec::new();
    for (model, metrics) in &grouped {
        let row = |tier: String, metric: &str, value: f64| SummaryRow {
            model: model.to_string(),
            tier,
            metric: metric.to_string(),
            value,
        };
        let mut overall = Vec::new();
        let mut per_tier = Vec::new();
        let mut deltas = Vec::new();
        for (metric, tiers) in metrics {
            let all: Vec<f64> = tiers.values().flatten().copied().collect();
            overall.push(row("all".into(), metric, mean(&all)));
            for (tier, values) in tiers {
                per_tier.push((*tier, row(tier.to_string(), metric, mean(values))));
            }
            if let (Some(s1), Some(s5)) = (tiers.get(&Tier::S1), tiers.get(&Tier::S5)) {
                deltas.push(row("DELTA".into(), metric, mean(s5) - mean(s1)));
            }
        }
        per_tier.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.metric.cmp(&b.1.metric)));
        rows.extend(overall);
        rows.extend(per_tier.into_iter().map(|(_, r)| r));
        rows.extend(deltas);
    }
    rows
}

pub fn write_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}
