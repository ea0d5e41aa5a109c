//! Trajectory-level metrics: tool selection, parameter validity, coverage,
//! efficiency and dependency compliance.

use std::collections::{HashMap, HashSet};

use cutscene_core::canonical;
use cutscene_core::toolkit::{Toolkit, ToolResult};
use cutscene_core::trajectory::ToolCallRecord;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::scenario::{values_at, Edge, EdgeKind, EssentialOp, ScenarioBundle};

const NUMERIC_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CallIssue {
    pub index: usize,
    pub tool: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingOp {
    pub tool: String,
    pub match_args: Value,
    pub missing: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependencyViolation {
    pub edge: String,
    /// Position of the offending call in the trajectory.
    pub index: usize,
    /// The bound value that had no producer, for instance edges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L1Report {
    pub tsa: f64,
    pub pv: f64,
    pub cc: f64,
    pub ce: f64,
    pub dc: f64,
    pub total_calls: usize,
    pub unselected_calls: Vec<CallIssue>,
    pub invalid_calls: Vec<CallIssue>,
    pub missing_ops: Vec<MissingOp>,
    pub duplicate_calls: Vec<usize>,
    pub dependency_checks: usize,
    pub dependency_violations: Vec<DependencyViolation>,
}

fn ratio(good: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        good as f64 / total as f64
    }
}

/// Does `actual` satisfy `expected`? Objects match as subsets, numbers
/// within a small tolerance, everything else exactly.
pub fn json_matches(expected: &Value, actual: &Value) -> bool {
    match (expected, actual) {
        (Value::Number(a), Value::Number(b)) => match (a.as_f64(), b.as_f64()) {
            (Some(a), Some(b)) => (a - b).abs() <= NUMERIC_TOLERANCE,
            _ => a == b,
        },
        (Value::Array(a), Value::Array(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| json_matches(x, y)),
        (Value::Object(a), Value::Object(b)) => a.iter().all(|(k, v)| b.get(k).is_some_and(|w| json_matches(v, w))),
        _ => expected == actual,
    }
}

fn op_matches(op: &EssentialOp, call: &ToolCallRecord) -> bool {
    op.tool == call.tool
        && op
            .match_args
            .iter()
            .all(|(k, v)| call.args.get(k).is_some_and(|a| json_matches(v, a)))
}

/// Replay every call on `toolkit` and collect the results.
pub fn replay(trajectory: &[ToolCallRecord], toolkit: &mut Toolkit) -> Vec<ToolResult> {
    trajectory.iter().map(|c| toolkit.call(&c.tool, &c.args)).collect()
}

/// Greedy in-order coverage: each successful call consumes the first
/// essential op it matches that still has multiplicity left.
pub fn coverage(trajectory: &[ToolCallRecord], ok: &[bool], ops: &[EssentialOp]) -> (f64, Vec<MissingOp>) {
    let mut remaining: Vec<u32> = ops.iter().map(|o| o.multiplicity).collect();
    for (call, _) in trajectory.iter().zip(ok).filter(|(_, ok)| **ok) {
        if let Some(i) = (0..ops.len()).find(|&i| remaining[i] > 0 && op_matches(&ops[i], call)) {
            remaining[i] -= 1;
        }
    }
    let required: u32 = ops.iter().map(|o| o.multiplicity).sum();
    let missing_total: u32 = remaining.iter().sum();
    let missing = ops
        .iter()
        .zip(&remaining)
        .filter(|(_, r)| **r > 0)
        .map(|(op, r)| MissingOp {
            tool: op.tool.clone(),
            match_args: Value::Object(op.match_args.clone()),
            missing: *r,
        })
        .collect();
    let cc = if required == 0 {
        1.0
    } else {
        (required - missing_total) as f64 / required as f64
    };
    (cc, missing)
}

/// Indices of calls that repeat an earlier (tool, canonical args) pair.
pub fn duplicates(trajectory: &[ToolCallRecord]) -> Vec<usize> {
    let mut seen = HashSet::new();
    trajectory
        .iter()
        .enumerate()
        .filter(|(_, c)| !seen.insert((c.tool.as_str(), canonical::to_compact(&canonical::normalize(&c.args)))))
        .map(|(i, _)| i)
        .collect()
}

/// Dependency checks in one pass. A precedence edge is one check, made
/// when its target tool occurs: some source call must come before the
/// first target call. An instance edge makes one check per (target call,
/// bound value): an earlier source call must have produced that value.
pub fn dependency_compliance(trajectory: &[ToolCallRecord], dag: &[Edge]) -> (usize, Vec<DependencyViolation>) {
    let mut checks = 0;
    let mut violations = Vec::new();
    // Per edge: has the source tool been seen, and which values it bound.
    let mut source_seen = vec![false; dag.len()];
    let mut target_seen = vec![false; dag.len()];
    let mut produced: Vec<HashSet<String>> = vec![HashSet::new(); dag.len()];
    let mut by_to: HashMap<&str, Vec<usize>> = HashMap::new();
    let mut by_from: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, e) in dag.iter().enumerate() {
        by_to.entry(e.to_tool.as_str()).or_default().push(i);
        by_from.entry(e.from_tool.as_str()).or_default().push(i);
    }
    for (index, call) in trajectory.iter().enumerate() {
        for &i in by_to.get(call.tool.as_str()).into_iter().flatten() {
            let edge = &dag[i];
            match (&edge.kind, &edge.bind_on) {
                (EdgeKind::Instance, Some(bind)) => {
                    for value in values_at(&call.args, bind.to_path()) {
                        checks += 1;
                        if !produced[i].contains(&value) {
                            violations.push(DependencyViolation {
                                edge: edge.to_string(),
                                index,
                                value: Some(value),
                            });
                        }
                    }
                }
                _ => {
                    if !target_seen[i] {
                        target_seen[i] = true;
                        checks += 1;
                        if !source_seen[i] {
                            violations.push(DependencyViolation {
                                edge: edge.to_string(),
                                index,
                                value: None,
                            });
                        }
                    }
                }
            }
        }
        for &i in by_from.get(call.tool.as_str()).into_iter().flatten() {
            source_seen[i] = true;
            if let Some(bind) = &dag[i].bind_on {
                produced[i].extend(values_at(&call.args, bind.from_path()));
            }
        }
    }
    (checks, violations)
}

/// Score `trajectory` against `bundle`, replaying it on `toolkit`, which
/// should start empty.
pub fn eval_l1(trajectory: &[ToolCallRecord], bundle: &ScenarioBundle, mut toolkit: Toolkit) -> L1Report {
    let total = trajectory.len();
    let registered = Toolkit::tool_names();
    let unselected_calls: Vec<CallIssue> = trajectory
        .iter()
        .enumerate()
        .filter_map(|(index, c)| {
            let detail = if !registered.contains(&c.tool.as_str()) {
                "tool is not registered"
            } else if !bundle.allowed_tools.contains(&c.tool) {
                "tool is outside the scenario's allowed set"
            } else {
                return None;
            };
            Some(CallIssue {
                index,
                tool: c.tool.clone(),
                detail: detail.into(),
            })
        })
        .collect();

    let results = replay(trajectory, &mut toolkit);
    let ok: Vec<bool> = results.iter().map(ToolResult::is_ok).collect();
    let invalid_calls: Vec<CallIssue> = trajectory
        .iter()
        .zip(&results)
        .enumerate()
        .filter(|(_, (_, r))| !r.is_ok())
        .map(|(index, (c, r))| CallIssue {
            index,
            tool: c.tool.clone(),
            detail: format!("{}: {}", r.data.get("error").and_then(Value::as_str).unwrap_or("error"), r.message),
        })
        .collect();

    let (cc, missing_ops) = coverage(trajectory, &ok, &bundle.essential_ops);
    let cc = if total == 0 { 0.0 } else { cc };
    let duplicate_calls = duplicates(trajectory);
    let (dependency_checks, dependency_violations) = dependency_compliance(trajectory, &bundle.dag);

    L1Report {
        tsa: ratio(total - unselected_calls.len(), total),
        pv: ratio(total - invalid_calls.len(), total),
        cc,
        ce: ratio(total - duplicate_calls.len(), total),
        dc: ratio(dependency_checks - dependency_violations.len(), dependency_checks),
        total_calls: total,
        unselected_calls,
        invalid_calls,
        missing_ops,
        duplicate_calls,
        dependency_checks,
        dependency_violations,
    }
}
