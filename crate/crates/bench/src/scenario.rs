//! Scenario bundles: one directory per test case.
//!
//! ```text
//! S2_001/
//!   storyboard.md        input given to the agent
//!   essential_ops.json   calls a correct solution must contain
//!   dag.json             dependency edges between tools
//!   gt_trajectory.json   reference trajectory
//!   gt_snapshot.json     reference final sequence
//!   expected_tracks.json character -> required track kinds
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use cutscene_core::sequence::SectionKind;
use cutscene_core::toolkit::{director_scope, Toolkit};
use cutscene_core::trajectory::{self, ToolCallRecord};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{file}: {message}")]
    Malformed { file: String, message: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("unknown scenario '{0}'")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tier {
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl Tier {
    pub const ALL: [Tier; 5] = [Tier::S1, Tier::S2, Tier::S3, Tier::S4, Tier::S5];

    /// Tier from a scenario id such as `S2_001`.
    pub fn from_id(id: &str) -> Option<Tier> {
        let prefix = id.split('_').next()?;
        Tier::ALL.into_iter().find(|t| t.to_string() == prefix)
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", *self as u8 + 1)
    }
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EssentialOp {
    pub tool: String,
    /// Only these arguments are compared; others may vary freely.
    #[serde(default)]
    pub match_args: Map<String, Value>,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Precedence,
    Instance,
}

/// Argument paths an instance edge binds on. A bare string names the same
/// argument on both sides. Paths are dotted (`position_args.from_actor_name`);
/// array values bind element-wise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BindOn {
    Same(String),
    Pair { from: String, to: String },
}

impl BindOn {
    pub fn from_path(&self) -> &str {
        match self {
            BindOn::Same(p) => p,
            BindOn::Pair { from, .. } => from,
        }
    }

    pub fn to_path(&self) -> &str {
        match self {
            BindOn::Same(p) => p,
            BindOn::Pair { to, .. } => to,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub from_tool: String,
    pub to_tool: String,
    pub kind: EdgeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bind_on: Option<BindOn>,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.kind, &self.bind_on) {
            (EdgeKind::Instance, Some(b)) => {
                write!(f, "{}.{} -> {}.{}", self.from_tool, b.from_path(), self.to_tool, b.to_path())
            }
            _ => write!(f, "{} -> {}", self.from_tool, self.to_tool),
        }
    }
}

/// Values at a dotted path; arrays at the end of the path are flattened
/// and scalars are rendered as text.
pub fn values_at(args: &Value, path: &str) -> Vec<String> {
    let mut node = args;
    for key in path.split('.') {
        match node.get(key) {
            Some(v) => node = v,
            None => return Vec::new(),
        }
    }
    let render = |v: &Value| match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => None,
        other => Some(other.to_string()),
    };
    match node {
        Value::Array(items) => items.iter().filter_map(render).collect(),
        other => render(other).into_iter().collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioBundle {
    pub id: String,
    pub tier: Tier,
    pub storyboard: String,
    pub essential_ops: Vec<EssentialOp>,
    pub dag: Vec<Edge>,
    pub gt_trajectory: Vec<ToolCallRecord>,
    pub gt_snapshot: Value,
    pub expected_tracks: BTreeMap<String, Vec<SectionKind>>,
    /// Tools a solution may use; the director's scope.
    pub allowed_tools: BTreeSet<String>,
}

fn read(dir: &Path, file: &str) -> Result<String, ScenarioError> {
    let path = dir.join(file);
    std::fs::read_to_string(&path).map_err(|e| ScenarioError::Io {
        path,
        message: e.to_string(),
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(dir: &Path, file: &str) -> Result<T, ScenarioError> {
    serde_json::from_str(&read(dir, file)?).map_err(|e| ScenarioError::Malformed {
        file: file.to_string(),
        message: e.to_string(),
    })
}

impl ScenarioBundle {
    pub fn load(dir: &Path) -> Result<Self, ScenarioError> {
        let id = dir
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| ScenarioError::Invalid(format!("bad scenario directory {}", dir.display())))?
            .to_string();
        let tier = Tier::from_id(&id).ok_or_else(|| ScenarioError::Invalid(format!("'{id}' has no S1..S5 prefix")))?;
        let gt_trajectory = trajectory::parse(&read(dir, "gt_trajectory.json")?).map_err(|e| ScenarioError::Malformed {
            file: "gt_trajectory.json".into(),
            message: e.to_string(),
        })?;
        let bundle = Self {
            id,
            tier,
            storyboard: read(dir, "storyboard.md")?,
            essential_ops: parse_json(dir, "essential_ops.json")?,
            dag: parse_json(dir, "dag.json")?,
            gt_trajectory,
            gt_snapshot: parse_json(dir, "gt_snapshot.json")?,
            expected_tracks: parse_json(dir, "expected_tracks.json")?,
            allowed_tools: director_scope().into_iter().map(str::to_string).collect(),
        };
        bundle.validate()?;
        Ok(bundle)
    }

    /// Find `id` under a directory of bundles.
    pub fn load_by_id(root: &Path, id: &str) -> Result<Self, ScenarioError> {
        let dir = root.join(id);
        if !dir.is_dir() {
            return Err(ScenarioError::Unknown(id.to_string()));
        }
        Self::load(&dir)
    }

    /// Every bundle directory under `root`, sorted by id.
    pub fn load_all(root: &Path) -> Result<Vec<Self>, ScenarioError> {
        let entries = std::fs::read_dir(root).map_err(|e| ScenarioError::Io {
            path: root.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut dirs: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.join("gt_trajectory.json").is_file())
            .collect();
        dirs.sort();
        dirs.iter().map(|d| Self::load(d)).collect()
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let known = Toolkit::tool_names();
        for op in &self.essential_ops {
            if !known.contains(&op.tool.as_str()) {
                return Err(ScenarioError::Invalid(format!("essential op names unknown tool '{}'", op.tool)));
            }
            if op.multiplicity == 0 {
                return Err(ScenarioError::Invalid(format!("essential op '{}' has multiplicity 0", op.tool)));
            }
        }
        for edge in &self.dag {
            for t in [&edge.from_tool, &edge.to_tool] {
                if !known.contains(&t.as_str()) {
                    return Err(ScenarioError::Invalid(format!("edge names unknown tool '{t}'")));
                }
            }
            if edge.kind == EdgeKind::Instance && edge.bind_on.is_none() {
                return Err(ScenarioError::Invalid(format!("instance edge {edge} needs bind_on")));
            }
        }
        if let Some(cycle_at) = find_cycle(&self.dag) {
            return Err(ScenarioError::Invalid(format!("dependency graph has a cycle through '{cycle_at}'")));
        }
        Ok(())
    }
}

/// A node on a cycle, if the tool graph has one.
pub fn find_cycle(dag: &[Edge]) -> Option<String> {
    let mut adjacency: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in dag {
        adjacency.entry(e.from_tool.as_str()).or_default().push(e.to_tool.as_str());
        adjacency.entry(e.to_tool.as_str()).or_default();
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<&str, u8> = adjacency.keys().map(|k| (*k, 0)).collect();
    fn visit<'a>(
        node: &'a str,
        adjacency: &BTreeMap<&'a str, Vec<&'a str>>,
        state: &mut BTreeMap<&'a str, u8>,
    ) -> Option<String> {
        state.insert(node, 1);
        for &next in &adjacency[node] {
            match state[next] {
                1 => return Some(next.to_string()),
                0 => {
                    if let Some(c) = visit(next, adjacency, state) {
                        return Some(c);
                    }
                }
                _ => {}
            }
        }
        state.insert(node, 2);
        None
    }
    let nodes: Vec<&str> = adjacency.keys().copied().collect();
    for node in nodes {
        if state[node] == 0 {
            if let Some(c) = visit(node, &adjacency, &mut state) {
                return Some(c);
            }
        }
    }
    None
}
