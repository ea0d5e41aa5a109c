//! Recorded tool-call trajectories, the input format of the L1 evaluator.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::canonical;
use crate::toolkit::Status;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolCallRecord {
    /// Position in the server-wide submission order. Hand-written files
    /// may omit it; loading then numbers records by position.
    #[serde(default)]
    pub index: u64,
    /// Scoped or isolated session the call came through, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<String>,
    pub tool: String,
    #[serde(default)]
    pub args: Value,
    #[serde(default = "default_status")]
    pub status: Status,
}

fn default_status() -> Status {
    Status::Ok
}

impl ToolCallRecord {
    pub fn new(index: u64, tool: &str, args: &Value, status: Status) -> Self {
        Self {
            index,
            session: None,
            tool: tool.to_string(),
            args: canonical::normalize(args),
            status,
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid trajectory: {0}")]
pub struct TrajectoryError(String);

/// Parse a trajectory file. Records without an explicit index are numbered
/// by position; arguments are normalized.
pub fn parse(text: &str) -> Result<Vec<ToolCallRecord>, TrajectoryError> {
    let raw: Vec<Value> = serde_json::from_str(text).map_err(|e| TrajectoryError(e.to_string()))?;
    raw.into_iter()
        .enumerate()
        .map(|(i, v)| {
            let has_index = v.get("index").is_some();
            let mut rec: ToolCallRecord =
                serde_json::from_value(v).map_err(|e| TrajectoryError(format!("record {i}: {e}")))?;
            if !has_index {
                rec.index = i as u64;
            }
            if rec.args.is_null() {
                rec.args = Value::Object(Default::default());
            }
            rec.args = canonical::normalize(&rec.args);
            Ok(rec)
        })
        .collect()
}

pub fn render(records: &[ToolCallRecord]) -> String {
    canonical::to_pretty(&serde_json::to_value(records).expect("records serialize"))
}
