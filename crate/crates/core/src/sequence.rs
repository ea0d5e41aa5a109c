//! In-memory level sequence: bindings, per-character tracks, the camera cut
//! track and semantic metadata, plus its canonical JSON document form.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::camera::MovementKeyframe;
use crate::canonical;
use crate::math::{Rotator, Vec3};

pub const DEFAULT_FRAME_RATE: u32 = 30;

/// Character capsule used by the overlap check.
pub const CAPSULE_RADIUS: f64 = 35.0;
pub const CAPSULE_HEIGHT: f64 = 180.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequenceError {
    #[error("binding '{0}' already exists")]
    DuplicateName(String),
    #[error("asset identifier must not be empty")]
    EmptyIdentifier,
    #[error("binding name must not be empty")]
    EmptyName,
    #[error("no binding named '{0}'")]
    UnknownBinding(String),
    #[error("binding '{0}' is a camera and has no character tracks")]
    BindingIsCamera(String),
    #[error("no camera binding named '{0}'")]
    UnknownCamera(String),
    #[error("invalid time range [{start}, {end}): need 0 <= start < end")]
    InvalidRange { start: f64, end: f64 },
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("malformed sequence document: {0}")]
    MalformedDocument(String),
}

pub type Result<T, E = SequenceError> = std::result::Result<T, E>;

/// Half-open interval `[start, end)` in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeRange {
    start: f64,
    end: f64,
}

impl TimeRange {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() || start < 0.0 || start >= end {
            return Err(SequenceError::InvalidRange { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn intersect(&self, other: &TimeRange) -> Option<TimeRange> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start < end).then_some(TimeRange { start, end })
    }
}

impl fmt::Display for TimeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionKind {
    Animation,
    Audio,
    Facial,
}

impl SectionKind {
    pub const ALL: [SectionKind; 3] = [SectionKind::Animation, SectionKind::Audio, SectionKind::Facial];

    pub fn as_str(&self) -> &'static str {
        match self {
            SectionKind::Animation => "animation",
            SectionKind::Audio => "audio",
            SectionKind::Facial => "facial",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "animation" => Some(SectionKind::Animation),
            "audio" => Some(SectionKind::Audio),
            "facial" => Some(SectionKind::Facial),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub asset_id: String,
    pub range: TimeRange,
    pub kind: SectionKind,
    pub speech_text: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BindingKind {
    Character,
    Camera,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub name: String,
    pub kind: BindingKind,
    pub identifier: String,
    pub location: Vec3,
    pub rotation: Rotator,
    /// Character tracks; a key exists once a section has been added to it.
    pub tracks: BTreeMap<SectionKind, Vec<Section>>,
    /// Camera movement keys from the last applied movement template.
    pub keyframes: Vec<MovementKeyframe>,
}

impl Binding {
    pub fn track(&self, kind: SectionKind) -> &[Section] {
        self.tracks.get(&kind).map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CameraCutEntry {
    pub camera_name: String,
    pub range: TimeRange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetadataBlock {
    pub binding_name: String,
    pub track: String,
    pub range: TimeRange,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSequence {
    pub bindings: Vec<Binding>,
    pub camera_cuts: Vec<CameraCutEntry>,
    pub metadata: Vec<MetadataBlock>,
    pub current_time: f64,
    pub frame_rate: u32,
}

impl Default for LevelSequence {
    fn default() -> Self {
        Self::new(DEFAULT_FRAME_RATE)
    }
}

impl LevelSequence {
    pub fn new(frame_rate: u32) -> Self {
        Self {
            bindings: Vec::new(),
            camera_cuts: Vec::new(),
            metadata: Vec::new(),
            current_time: 0.0,
            frame_rate: frame_rate.max(1),
        }
    }

    pub fn binding(&self, name: &str) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.name == name)
    }

    pub fn binding_mut(&mut self, name: &str) -> Option<&mut Binding> {
        self.bindings.iter_mut().find(|b| b.name == name)
    }

    pub fn character(&self, name: &str) -> Result<&Binding> {
        match self.binding(name) {
            None => Err(SequenceError::UnknownBinding(name.to_string())),
            Some(b) if b.kind == BindingKind::Camera => Err(SequenceError::BindingIsCamera(name.to_string())),
            Some(b) => Ok(b),
        }
    }

    pub fn characters(&self) -> impl Iterator<Item = &Binding> {
        self.bindings.iter().filter(|b| b.kind == BindingKind::Character)
    }

    pub fn cameras(&self) -> impl Iterator<Item = &Binding> {
        self.bindings.iter().filter(|b| b.kind == BindingKind::Camera)
    }

    pub fn add_binding(&mut self, name: &str, kind: BindingKind, identifier: &str, location: Vec3) -> Result<String> {
        if name.trim().is_empty() {
            return Err(SequenceError::EmptyName);
        }
        if identifier.trim().is_empty() {
            return Err(SequenceError::EmptyIdentifier);
        }
        if !location.is_finite() {
            return Err(SequenceError::NonFinite("location"));
        }
        if self.binding(name).is_some() {
            return Err(SequenceError::DuplicateName(name.to_string()));
        }
        self.bindings.push(Binding {
            name: name.to_string(),
            kind,
            identifier: identifier.to_string(),
            location,
            rotation: Rotator::ZERO,
            tracks: BTreeMap::new(),
            keyframes: Vec::new(),
        });
        Ok(name.to_string())
    }

    /// Insert a section on a character track, keeping the track sorted by
    /// start time. Overlaps are stored as-is.
    pub fn add_section(
        &mut self,
        binding_name: &str,
        kind: SectionKind,
        asset_id: &str,
        range: TimeRange,
        speech_text: Option<String>,
    ) -> Result<TimeRange> {
        if asset_id.trim().is_empty() {
            return Err(SequenceError::EmptyIdentifier);
        }
        let binding = self
            .binding_mut(binding_name)
            .ok_or_else(|| SequenceError::UnknownBinding(binding_name.to_string()))?;
        if binding.kind == BindingKind::Camera {
            return Err(SequenceError::BindingIsCamera(binding_name.to_string()));
        }
        let track = binding.tracks.entry(kind).or_default();
        let at = track.partition_point(|s| s.range.start <= range.start);
        track.insert(
            at,
            Section {
                asset_id: asset_id.to_string(),
                range,
                kind,
                speech_text,
            },
        );
        Ok(range)
    }

    pub fn add_camera_cut(&mut self, camera_name: &str, range: TimeRange) -> Result<()> {
        match self.binding(camera_name) {
            Some(b) if b.kind == BindingKind::Camera => {}
            _ => return Err(SequenceError::UnknownCamera(camera_name.to_string())),
        }
        self.camera_cuts.push(CameraCutEntry {
            camera_name: camera_name.to_string(),
            range,
        });
        Ok(())
    }

    pub fn update_metadata(&mut self, block: MetadataBlock) {
        self.metadata.push(block);
    }

    /// Reset to an empty sequence, keeping the frame rate.
    pub fn clear(&mut self) {
        *self = LevelSequence::new(self.frame_rate);
    }

    /// Latest end over all sections and camera cuts; 0 when empty.
    pub fn effective_duration(&self) -> f64 {
        let sections = self
            .bindings
            .iter()
            .flat_map(|b| b.tracks.values().flatten())
            .map(|s| s.range.end);
        let cuts = self.camera_cuts.iter().map(|c| c.range.end);
        sections.chain(cuts).fold(0.0, f64::max)
    }

    /// Pairs of characters whose capsules intersect. Characters are static
    /// between tool calls, so `time` only selects which snapshot is checked.
    pub fn check_character_overlap(&self, _time: f64) -> Vec<(String, String)> {
        let chars: Vec<&Binding> = self.characters().collect();
        let mut pairs = Vec::new();
        for (i, a) in chars.iter().enumerate() {
            for b in &chars[i + 1..] {
                let horizontal = (a.location - b.location).length_xy();
                let vertical = (a.location.z - b.location.z).abs();
                if horizontal < 2.0 * CAPSULE_RADIUS && vertical < CAPSULE_HEIGHT {
                    pairs.push((a.name.clone(), b.name.clone()));
                }
            }
        }
        pairs
    }

    pub fn to_document(&self) -> Value {
        let bindings: Vec<Value> = self.bindings.iter().map(binding_doc).collect();
        let cuts: Vec<Value> = self
            .camera_cuts
            .iter()
            .map(|c| json!({"camera_name": c.camera_name, "start": c.range.start, "end": c.range.end}))
            .collect();
        let metadata: Vec<Value> = self
            .metadata
            .iter()
            .map(|m| {
                json!({
                    "binding_name": m.binding_name,
                    "track": m.track,
                    "start": m.range.start,
                    "end": m.range.end,
                    "description": m.description,
                })
            })
            .collect();
        json!({
            "bindings": bindings,
            "camera_cuts": cuts,
            "metadata": metadata,
            "current_time": self.current_time,
            "duration": self.effective_duration(),
            "frame_rate": self.frame_rate,
        })
    }

    /// Canonical pretty JSON (the snapshot file format).
    pub fn serialize_state(&self) -> String {
        canonical::to_pretty(&self.to_document())
    }

    pub fn deserialize_state(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| SequenceError::MalformedDocument(e.to_string()))?;
        Self::from_document(&value)
    }

    pub fn from_document(value: &Value) -> Result<Self> {
        let doc: SequenceDoc =
            serde_json::from_value(value.clone()).map_err(|e| SequenceError::MalformedDocument(e.to_string()))?;
        let mut seq = LevelSequence::new(doc.frame_rate);
        if !doc.current_time.is_finite() || doc.current_time < 0.0 {
            return Err(SequenceError::MalformedDocument("current_time must be a finite non-negative number".into()));
        }
        seq.current_time = doc.current_time;
        for b in doc.bindings {
            if !b.location.is_finite() || !b.rotation.is_finite() {
                return Err(SequenceError::NonFinite("binding transform"));
            }
            seq.add_binding(&b.name, b.kind, &b.identifier, b.location)?;
            let rotation = Rotator::new(b.rotation.pitch, b.rotation.yaw, b.rotation.roll);
            let keyframes = b.keyframes;
            if b.kind == BindingKind::Camera && !b.tracks.is_empty() {
                return Err(SequenceError::MalformedDocument(format!("camera '{}' carries character tracks", b.name)));
            }
            for (kind_name, sections) in b.tracks {
                let kind = SectionKind::parse(&kind_name)
                    .ok_or_else(|| SequenceError::MalformedDocument(format!("unknown track kind '{kind_name}'")))?;
                for s in sections {
                    seq.add_section(&b.name, kind, &s.asset_id, TimeRange::new(s.start, s.end)?, s.speech_text)?;
                }
            }
            let stored = seq.binding_mut(&b.name).expect("binding just added");
            stored.rotation = rotation;
            stored.keyframes = keyframes;
        }
        for c in doc.camera_cuts {
            seq.add_camera_cut(&c.camera_name, TimeRange::new(c.start, c.end)?)?;
        }
        for m in doc.metadata {
            seq.update_metadata(MetadataBlock {
                binding_name: m.binding_name,
                track: m.track,
                range: TimeRange::new(m.start, m.end)?,
                description: m.description,
            });
        }
        if let Some(stated) = doc.duration {
            let actual = seq.effective_duration();
            if (stated - actual).abs() > 1e-6 {
                return Err(SequenceError::MalformedDocument(format!(
                    "stated duration {stated} does not match computed {actual}"
                )));
            }
        }
        Ok(seq)
    }
}

fn binding_doc(b: &Binding) -> Value {
    let mut doc = json!({
        "name": b.name,
        "kind": b.kind,
        "identifier": b.identifier,
        "location": b.location,
        "rotation": b.rotation,
    });
    match b.kind {
        BindingKind::Character => {
            let tracks: serde_json::Map<String, Value> = b
                .tracks
                .iter()
                .map(|(kind, sections)| {
                    let list: Vec<Value> = sections
                        .iter()
                        .map(|s| {
                            let mut v = json!({"asset_id": s.asset_id, "start": s.range.start, "end": s.range.end});
                            if let Some(text) = &s.speech_text {
                                v["speech_text"] = json!(text);
                            }
                            v
                        })
                        .collect();
                    (kind.as_str().to_string(), Value::Array(list))
                })
                .collect();
            doc["tracks"] = Value::Object(tracks);
        }
        BindingKind::Camera => {
            doc["keyframes"] = serde_json::to_value(&b.keyframes).expect("keyframes serialize");
        }
    }
    doc
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceDoc {
    bindings: Vec<BindingDoc>,
    camera_cuts: Vec<CutDoc>,
    #[serde(default)]
    metadata: Vec<MetadataDoc>,
    #[serde(default)]
    current_time: f64,
    #[serde(default)]
    duration: Option<f64>,
    #[serde(default = "default_frame_rate")]
    frame_rate: u32,
}

fn default_frame_rate() -> u32 {
    DEFAULT_FRAME_RATE
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BindingDoc {
    name: String,
    kind: BindingKind,
    identifier: String,
    location: Vec3,
    #[serde(default)]
    rotation: Rotator,
    #[serde(default)]
    tracks: BTreeMap<String, Vec<SectionDoc>>,
    #[serde(default)]
    keyframes: Vec<MovementKeyframe>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SectionDoc {
    asset_id: String,
    start: f64,
    end: f64,
    #[serde(default)]
    speech_text: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CutDoc {
    camera_name: String,
    start: f64,
    end: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetadataDoc {
    binding_name: String,
    track: String,
    start: f64,
    end: f64,
    description: String,
}

/// Merge ranges clipped to `clip`; returns disjoint sorted ranges and their
/// total length. Touching ranges are merged.
pub fn merge_intervals(ranges: &[TimeRange], clip: TimeRange) -> (Vec<TimeRange>, f64) {
    let mut clipped: Vec<TimeRange> = ranges.iter().filter_map(|r| r.intersect(&clip)).collect();
    clipped.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.end.total_cmp(&b.end)));
    let mut merged: Vec<TimeRange> = Vec::with_capacity(clipped.len());
    for r in clipped {
        match merged.last_mut() {
            Some(last) if r.start <= last.end => last.end = last.end.max(r.end),
            _ => merged.push(r),
        }
    }
    let total = merged.iter().map(TimeRange::length).sum();
    (merged, total)
}

/// Names of bindings in document order; used by diagnostics.
pub fn binding_names(seq: &LevelSequence) -> HashSet<&str> {
    seq.bindings.iter().map(|b| b.name.as_str()).collect()
}
