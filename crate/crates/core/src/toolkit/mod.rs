//! The agent-facing tool surface.
//!
//! Every tool is described by a [`ToolSchema`]; [`Toolkit::call`] validates
//! the arguments, dispatches to the handler and wraps the outcome in a
//! uniform [`ToolResult`] envelope. Calls are atomic: a failing call leaves
//! the sequence and viewport exactly as they were.

mod catalog;
mod handlers;
pub mod orient;
pub mod schema;
pub mod services;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::assets::AssetRegistry;
use crate::camera::CameraError;
use crate::math::{Rotator, Vec3};
use crate::sequence::{LevelSequence, SequenceError, DEFAULT_FRAME_RATE};
use crate::assets::AssetError;

pub use catalog::{director_scope, DIRECTOR_EXCLUDED};
pub use orient::OrientationDescriptor;
pub use schema::{Args, ParamSpec, ParamType, ToolSchema};
pub use services::{tts_duration, Tone};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToolError {
    #[error("unknown tool '{name}'")]
    UnknownTool { name: String },
    #[error("schema violation in {tool}: parameter '{field}': {reason}")]
    SchemaViolation { tool: String, field: String, reason: String },
    #[error("unknown {kind} identifier '{identifier}'{}", hint(suggestions))]
    UnknownAsset {
        kind: &'static str,
        identifier: String,
        suggestions: Vec<String>,
    },
    #[error("asset '{identifier}' is of kind {actual}, expected {expected}")]
    WrongAssetKind {
        identifier: String,
        expected: &'static str,
        actual: String,
    },
    #[error("asset '{0}' has no positive numeric 'duration' field")]
    MissingDuration(String),
    #[error("no character named '{name}' in the sequence; characters: [{}]", available.join(", "))]
    UnknownCharacter { name: String, available: Vec<String> },
    #[error("location [{}, {}, {}] is outside the bounding volume {bounds}", location[0], location[1], location[2])]
    OutOfBounds { location: [f64; 3], bounds: String },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("no earlier viewport pose to restore")]
    NothingToUndo,
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Asset(#[from] AssetError),
    #[error(transparent)]
    Camera(#[from] CameraError),
}

fn hint(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!("; did you mean: {}", suggestions.join(", "))
    }
}

impl ToolError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            ToolError::UnknownTool { .. } => "unknown_tool",
            ToolError::SchemaViolation { .. } => "schema_violation",
            ToolError::UnknownAsset { .. } => "unknown_identifier",
            ToolError::WrongAssetKind { .. } => "wrong_asset_kind",
            ToolError::MissingDuration(_) => "missing_duration",
            ToolError::UnknownCharacter { .. } => "unknown_character",
            ToolError::OutOfBounds { .. } => "out_of_bounds",
            ToolError::InvalidArgument(_) => "invalid_argument",
            ToolError::NothingToUndo => "nothing_to_undo",
            ToolError::Sequence(SequenceError::DuplicateName(_)) => "duplicate_name",
            ToolError::Sequence(SequenceError::UnknownCamera(_)) => "unknown_camera",
            ToolError::Sequence(SequenceError::InvalidRange { .. }) => "invalid_range",
            ToolError::Sequence(_) => "sequence_error",
            ToolError::Asset(_) => "asset_error",
            ToolError::Camera(CameraError::UnknownTemplate { .. }) => "unknown_template",
            ToolError::Camera(CameraError::UnknownBone { .. }) => "unknown_bone",
            ToolError::Camera(_) => "camera_error",
        }
    }

    fn data(&self) -> Value {
        let mut data = json!({"error": self.code()});
        match self {
            ToolError::UnknownAsset { suggestions, .. } => data["suggestions"] = json!(suggestions),
            ToolError::UnknownCharacter { available, .. } => data["available"] = json!(available),
            ToolError::SchemaViolation { field, .. } => data["field"] = json!(field),
            _ => {}
        }
        data
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

/// Uniform result envelope of every tool call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolResult {
    pub status: Status,
    pub data: Value,
    pub message: String,
}

impl ToolResult {
    pub fn ok(data: Value, message: impl Into<String>) -> Self {
        Self {
            status: Status::Ok,
            data,
            message: message.into(),
        }
    }

    pub fn error(err: &ToolError) -> Self {
        Self {
            status: Status::Error,
            data: err.data(),
            message: err.to_string(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("envelope serializes")
    }
}

/// Region characters may be placed in, in centimeters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundingVolume {
    pub half_extent_xy: f64,
    pub min_z: f64,
    pub max_z: f64,
}

impl Default for BoundingVolume {
    fn default() -> Self {
        Self {
            half_extent_xy: 2000.0,
            min_z: 0.0,
            max_z: 500.0,
        }
    }
}

impl BoundingVolume {
    pub fn contains(&self, p: Vec3) -> bool {
        p.x.abs() <= self.half_extent_xy
            && p.y.abs() <= self.half_extent_xy
            && p.z >= self.min_z
            && p.z <= self.max_z
    }

    fn describe(&self) -> String {
        format!(
            "x,y in [-{h}, {h}], z in [{}, {}]",
            self.min_z,
            self.max_z,
            h = self.half_extent_xy
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToolkitConfig {
    pub frame_rate: u32,
    pub bounds: BoundingVolume,
    pub tones: Vec<Tone>,
    pub viewport: ViewportPose,
}

impl Default for ToolkitConfig {
    fn default() -> Self {
        Self {
            frame_rate: DEFAULT_FRAME_RATE,
            bounds: BoundingVolume::default(),
            tones: services::default_tones(),
            viewport: ViewportPose::default(),
        }
    }
}

/// Editor viewport camera.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewportPose {
    pub location: Vec3,
    pub rotation: Rotator,
}

impl Default for ViewportPose {
    fn default() -> Self {
        Self {
            location: Vec3::new(-600.0, 0.0, 170.0),
            rotation: Rotator::ZERO,
        }
    }
}

pub struct Toolkit {
    sequence: LevelSequence,
    assets: AssetRegistry,
    config: ToolkitConfig,
    viewport: ViewportPose,
    viewport_undo: Option<ViewportPose>,
}

impl std::fmt::Debug for Toolkit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Toolkit")
            .field("bindings", &self.sequence.bindings.len())
            .field("assets", &self.assets)
            .finish_non_exhaustive()
    }
}

impl Toolkit {
    pub fn new(assets: AssetRegistry, config: ToolkitConfig) -> Self {
        Self {
            sequence: LevelSequence::new(config.frame_rate),
            assets,
            viewport: config.viewport,
            viewport_undo: None,
            config,
        }
    }

    /// Every tool schema, in catalog order.
    pub fn schemas() -> &'static [ToolSchema] {
        catalog::all()
    }

    pub fn schema(name: &str) -> Option<&'static ToolSchema> {
        catalog::find(name)
    }

    pub fn tool_names() -> Vec<&'static str> {
        catalog::names()
    }

    pub fn sequence(&self) -> &LevelSequence {
        &self.sequence
    }

    pub fn assets(&self) -> &AssetRegistry {
        &self.assets
    }

    pub fn assets_mut(&mut self) -> &mut AssetRegistry {
        &mut self.assets
    }

    pub fn config(&self) -> &ToolkitConfig {
        &self.config
    }

    pub fn viewport(&self) -> ViewportPose {
        self.viewport
    }

    /// Call a tool and wrap the outcome in the result envelope.
    pub fn call(&mut self, tool: &str, args: &Value) -> ToolResult {
        match self.try_call(tool, args) {
            Ok(result) => result,
            Err(e) => ToolResult::error(&e),
        }
    }

    /// Call a tool; errors are returned instead of being enveloped.
    pub fn try_call(&mut self, tool: &str, args: &Value) -> Result<ToolResult, ToolError> {
        let schema = catalog::find(tool).ok_or_else(|| ToolError::UnknownTool { name: tool.to_string() })?;
        let args = schema.validate(args)?;
        if !schema.mutation {
            return self.dispatch(tool, &args);
        }
        let saved_sequence = self.sequence.clone();
        let saved_view = (self.viewport, self.viewport_undo);
        let outcome = self.dispatch(tool, &args);
        if outcome.is_err() {
            self.sequence = saved_sequence;
            (self.viewport, self.viewport_undo) = saved_view;
        }
        outcome
    }
}
