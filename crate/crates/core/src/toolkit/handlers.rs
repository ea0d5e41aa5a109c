//! One handler per tool. Handlers validate everything they need before the
//! first mutation; [`Toolkit::try_call`] additionally rolls back on error.

use std::collections::BTreeMap;

use base64::Engine;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::orient::{yaw_towards, OrientationDescriptor};
use super::schema::Args;
use super::services::tts_duration;
use super::{Toolkit, ToolError, ToolResult, ViewportPose};
use crate::assets::{wav, AssetRecord, ImportRequest, IncludeGenerated, SourceType};
use crate::camera::{self, ActorRef, MovementSpec, MovementTemplate, PositionSpec, PositionTemplate, SkeletonProfile};
use crate::canonical;
use crate::math::{Rotator, Vec3};
use crate::sequence::{BindingKind, MetadataBlock, SectionKind, TimeRange};

type Outcome = Result<ToolResult, ToolError>;

const CAMERA_ACTOR: &str = "CineCameraActor";
const SUGGESTION_LIMIT: usize = 5;

fn round(v: f64) -> f64 {
    canonical::round6(v)
}

fn range_json(r: TimeRange) -> Value {
    json!({"start": r.start(), "end": r.end()})
}

impl Toolkit {
    pub(super) fn dispatch(&mut self, tool: &str, args: &Args) -> Outcome {
        match tool {
            "add_character" => self.add_character(args),
            "orient_character_to_center" => self.orient_character_to_center(args),
            "orient_character" => self.orient_character(args),
            "add_character_animation" => self.add_timed_section(args, SectionKind::Animation),
            "add_character_audio" => self.add_character_audio(args),
            "add_character_facial_animation" => self.add_timed_section(args, SectionKind::Facial),
            "check_character_collisions" => self.check_character_collisions(args),
            "get_queryable_asset_types" => self.get_queryable_asset_types(),
            "get_query_instruction" => self.get_query_instruction(args),
            "query_assets" => self.query_assets(args),
            "get_available_characters" => self.list_sheet("Characters"),
            "get_available_animations" => {
                let sheet = if args.str("gender")? == "female" { "Animation_Female" } else { "Animation_Male" };
                self.list_sheet(sheet)
            }
            "get_importable_asset_types" => self.get_importable_asset_types(),
            "get_import_guide" => self.get_import_guide(args),
            "import_dynamic_asset" => self.import_dynamic_asset(args),
            "add_camera" => self.add_camera(args),
            "set_active_camera" => self.set_active_camera(args),
            "get_available_camera_templates" => {
                Ok(ToolResult::ok(camera::template_catalog(), "6 position templates, 2 movement templates"))
            }
            "apply_camera_template" => self.apply_camera_template(args),
            "update_sequence_metadata" => self.update_sequence_metadata(args),
            "get_sequence_content" => Ok(ToolResult::ok(self.sequence.to_document(), "current sequence content")),
            "clear_sequence" => {
                self.sequence.clear();
                Ok(ToolResult::ok(json!({"cleared": true}), "sequence cleared"))
            }
            "set_current_sequence_time" => self.set_current_sequence_time(args),
            "move_view" => self.move_view(args),
            "undo_move_view" => self.undo_move_view(),
            "take_editor_screenshot" => self.screenshot(args, None),
            "take_camera_screenshot" => self.screenshot(args, Some(args.str("camera_name")?)),
            "get_available_tone" => self.get_available_tone(args),
            "tts_function_tool" => self.tts(args),
            "audio_to_face_expression_tool" => self.audio_to_face(args),
            "video_understanding_tool" => self.video_understanding(args),
            other => Err(ToolError::UnknownTool { name: other.to_string() }),
        }
    }

    // ---- lookups -------------------------------------------------------

    fn character_names(&self) -> Vec<String> {
        self.sequence.characters().map(|b| b.name.clone()).collect()
    }

    fn require_character(&self, name: &str) -> Result<(), ToolError> {
        match self.sequence.binding(name) {
            Some(b) if b.kind == BindingKind::Character => Ok(()),
            _ => Err(ToolError::UnknownCharacter {
                name: name.to_string(),
                available: self.character_names(),
            }),
        }
    }

    /// Resolve an identifier to a record whose kind starts with `kind`.
    fn asset_of_kind(&self, identifier: &str, kind: &'static str) -> Result<&AssetRecord, ToolError> {
        match self.assets.get(identifier) {
            Some(rec) if rec.asset_kind.starts_with(kind) => Ok(rec),
            Some(rec) => Err(ToolError::WrongAssetKind {
                identifier: identifier.to_string(),
                expected: kind,
                actual: rec.asset_kind.clone(),
            }),
            None => Err(ToolError::UnknownAsset {
                kind,
                identifier: identifier.to_string(),
                suggestions: self.assets.suggest(identifier, kind, SUGGESTION_LIMIT),
            }),
        }
    }

    fn asset_duration(rec: &AssetRecord) -> Result<f64, ToolError> {
        rec.number("duration")
            .filter(|d| d.is_finite() && *d > 0.0)
            .ok_or_else(|| ToolError::MissingDuration(rec.identifier.clone()))
    }

    /// Template view of a bound character, with bone heights overridden by
    /// `height_<bone>` fields of its asset record.
    fn actor_ref(&self, name: &str) -> Result<ActorRef, ToolError> {
        self.require_character(name)?;
        let binding = self.sequence.binding(name).expect("checked above");
        let mut skeleton = SkeletonProfile::default();
        if let Some(rec) = self.assets.get(&binding.identifier) {
            for (field, value) in &rec.public_data {
                if let (Some(bone), Some(h)) = (field.strip_prefix("height_"), value.as_f64()) {
                    skeleton = skeleton.with_bone(bone, h)?;
                }
            }
        }
        Ok(ActorRef {
            name: name.to_string(),
            location: binding.location,
            rotation: binding.rotation,
            skeleton,
        })
    }

    fn collisions_json(&self, involving: Option<&str>) -> Value {
        let pairs: Vec<Value> = self
            .sequence
            .check_character_overlap(self.sequence.current_time)
            .into_iter()
            .filter(|(a, b)| involving.is_none_or(|n| a == n || b == n))
            .map(|(a, b)| json!([a, b]))
            .collect();
        Value::Array(pairs)
    }

    fn set_yaw(&mut self, name: &str, yaw: f64) {
        if let Some(b) = self.sequence.binding_mut(name) {
            b.rotation = Rotator::from_yaw(yaw);
        }
    }

    fn resolve_orientation(&self, name: &str, raw: &str) -> Result<f64, ToolError> {
        let descriptor = OrientationDescriptor::parse(raw).map_err(ToolError::InvalidArgument)?;
        let binding = self.sequence.binding(name).expect("caller checked the binding");
        let locate = |other: &str| {
            self.sequence
                .binding(other)
                .filter(|b| b.kind == BindingKind::Character && b.name != name)
                .map(|b| b.location)
        };
        descriptor
            .resolve(binding.location, binding.rotation.yaw, locate)
            .map_err(ToolError::InvalidArgument)
    }

    // ---- characters and tracks ----------------------------------------

    fn add_character(&mut self, args: &Args) -> Outcome {
        let name = args.str("name")?;
        let identifier = args.str("identifier")?;
        let [x, y, z] = args.vec3("location")?;
        let location = Vec3::new(x, y, z.max(0.0));
        if !self.config.bounds.contains(location) {
            return Err(ToolError::OutOfBounds {
                location: location.to_array(),
                bounds: self.config.bounds.describe(),
            });
        }
        self.asset_of_kind(identifier, "Characters")?;
        let loaded = self.assets.invoke_loader(identifier, Some(&json!({"name": name})))?;
        self.sequence.add_binding(name, BindingKind::Character, identifier, location)?;
        if let Some(raw) = args.opt_str("orientation") {
            let yaw = self.resolve_orientation(name, raw)?;
            self.set_yaw(name, yaw);
        }
        let binding = self.sequence.binding(name).expect("just added");
        let data = json!({
            "name": name,
            "identifier": identifier,
            "location": binding.location,
            "rotation": binding.rotation,
            "loader": loaded,
            "collisions": self.collisions_json(Some(name)),
        });
        Ok(ToolResult::ok(data, format!("added character '{name}' ({identifier}) at [{}, {}, {}]", x, y, location.z)))
    }

    fn orient_character_to_center(&mut self, args: &Args) -> Outcome {
        let names = args.strings("names")?;
        if names.len() < 2 {
            return Err(ToolError::InvalidArgument("orient_character_to_center needs at least two names".into()));
        }
        for (i, n) in names.iter().enumerate() {
            self.require_character(n)?;
            if names[..i].contains(n) {
                return Err(ToolError::InvalidArgument(format!("'{n}' is listed twice")));
            }
        }
        let locations: Vec<Vec3> =
            names.iter().map(|n| self.sequence.binding(n).expect("checked").location).collect();
        let sum = locations.iter().fold(Vec3::ZERO, |acc, p| acc + *p);
        let centroid = sum * (1.0 / locations.len() as f64);
        let mut yaws = Map::new();
        for (n, loc) in names.iter().zip(&locations) {
            // A character standing on the centroid keeps its facing.
            if let Some(yaw) = yaw_towards(*loc, centroid) {
                self.set_yaw(n, yaw);
            }
            let yaw = self.sequence.binding(n).expect("checked").rotation.yaw;
            yaws.insert(n.clone(), json!(yaw));
        }
        let data = json!({"centroid": centroid, "yaw": yaws});
        Ok(ToolResult::ok(data, format!("{} characters now face their centroid", names.len())))
    }

    fn orient_character(&mut self, args: &Args) -> Outcome {
        let name = args.str("name")?;
        self.require_character(name)?;
        let yaw = self.resolve_orientation(name, args.str("orientation")?)?;
        self.set_yaw(name, yaw);
        let rotation = self.sequence.binding(name).expect("checked").rotation;
        Ok(ToolResult::ok(json!({"name": name, "rotation": rotation}), format!("'{name}' now has yaw {}", round(yaw))))
    }

    /// Animation and facial sections take their length from the asset.
    fn add_timed_section(&mut self, args: &Args, kind: SectionKind) -> Outcome {
        let character = args.str("character_name")?;
        let identifier = args.str("identifier")?;
        let start = args.f64("start_time")?;
        self.require_character(character)?;
        let asset_kind = match kind {
            SectionKind::Animation => "Animation",
            _ => "FacialAnimation",
        };
        let rec = self.asset_of_kind(identifier, asset_kind)?;
        let duration = Self::asset_duration(rec)?;
        let range = TimeRange::new(start, start + duration)?;
        self.assets.invoke_loader(identifier, None)?;
        let stored = self.sequence.add_section(character, kind, identifier, range, None)?;
        let mut data = range_json(stored);
        data["character_name"] = json!(character);
        data["identifier"] = json!(identifier);
        data["duration"] = json!(duration);
        Ok(ToolResult::ok(
            data,
            format!(
                "added {} '{identifier}' to {character} at [{}, {})",
                kind.as_str(),
                round(stored.start()),
                round(stored.end())
            ),
        ))
    }

    fn add_character_audio(&mut self, args: &Args) -> Outcome {
        let character = args.str("character_name")?;
        let identifier = args.str("identifier")?;
        let range = TimeRange::new(args.f64("start_time")?, args.f64("end_time")?)?;
        let speech = args.str("speech_text")?;
        self.require_character(character)?;
        self.asset_of_kind(identifier, "Audio")?;
        self.assets.invoke_loader(identifier, None)?;
        let speech = (!speech.is_empty()).then(|| speech.to_string());
        let stored = self.sequence.add_section(character, SectionKind::Audio, identifier, range, speech.clone())?;
        let mut data = range_json(stored);
        data["character_name"] = json!(character);
        data["identifier"] = json!(identifier);
        if let Some(text) = speech {
            data["speech_text"] = json!(text);
        }
        Ok(ToolResult::ok(
            data,
            format!("added audio '{identifier}' to {character} at [{}, {})", round(stored.start()), round(stored.end())),
        ))
    }

    fn check_character_collisions(&self, args: &Args) -> Outcome {
        let time = args.get("time").and_then(Value::as_f64).unwrap_or(self.sequence.current_time);
        let pairs = self.collisions_json(None);
        let count = pairs.as_array().map_or(0, Vec::len);
        Ok(ToolResult::ok(json!({"time": time, "collisions": pairs}), format!("{count} overlapping pair(s)")))
    }

    // ---- asset queries and import -------------------------------------

    fn get_queryable_asset_types(&self) -> Outcome {
        let types = self.assets.queryable_types();
        Ok(ToolResult::ok(json!({"asset_types": types}), format!("{} queryable asset types", types.len())))
    }

    fn get_query_instruction(&self, args: &Args) -> Outcome {
        let asset_type = args.str("asset_type")?;
        let instruction = self.assets.query_instruction(asset_type)?;
        let fields: Vec<Value> = self
            .assets
            .public_fields(asset_type)?
            .into_iter()
            .map(|(name, ty, description)| json!({"name": name, "type": ty, "description": description}))
            .collect();
        let data = json!({"asset_type": asset_type, "fields": fields, "instruction": instruction});
        Ok(ToolResult::ok(data, instruction))
    }

    fn query_assets(&self, args: &Args) -> Outcome {
        let asset_type = args.str("asset_type")?;
        let filters: BTreeMap<String, Value> =
            args.object("filters").map(|m| m.clone().into_iter().collect()).unwrap_or_default();
        let include = IncludeGenerated::parse(args.str("include_generated")?)?;
        let rows = self.assets.query(asset_type, &filters, include)?;
        let count = rows.len();
        Ok(ToolResult::ok(
            json!({"asset_type": asset_type, "count": count, "assets": rows}),
            format!("{count} {asset_type} asset(s) matched"),
        ))
    }

    fn list_sheet(&self, asset_type: &str) -> Outcome {
        let rows = self.assets.query(asset_type, &BTreeMap::new(), IncludeGenerated::Auto)?;
        let count = rows.len();
        Ok(ToolResult::ok(
            json!({"asset_type": asset_type, "count": count, "assets": rows}),
            format!("{count} {asset_type} asset(s)"),
        ))
    }

    fn get_importable_asset_types(&self) -> Outcome {
        let types: Vec<Value> = self
            .assets
            .receivers()
            .map(|r| {
                json!({
                    "data_type": r.importable_type,
                    "asset_kind": r.asset_kind,
                    "description": r.description,
                    "extensions": r.extensions,
                })
            })
            .collect();
        let count = types.len();
        Ok(ToolResult::ok(json!({"importable_types": types}), format!("{count} importable types")))
    }

    fn get_import_guide(&self, args: &Args) -> Outcome {
        let spec = self.assets.receiver(args.str("data_type")?)?;
        let fields = |pairs: &[(String, String)]| -> Map<String, Value> {
            pairs.iter().map(|(k, v)| (k.clone(), json!(v))).collect()
        };
        let data = json!({
            "data_type": spec.importable_type,
            "asset_kind": spec.asset_kind,
            "description": spec.description,
            "extensions": spec.extensions,
            "source_types": ["base64", "file_path", "url"],
            "provided_fields": fields(&spec.provided_fields),
            "recommended_metadata": fields(&spec.recommended_metadata),
            "identifier_format": format!("{}_<identifier_hint>_<6 hex digits of the content hash>", spec.importable_type),
            "behavior": "Importing identical content with the same hint returns the existing asset. \
                         Imported assets are queryable under their asset kind and usable by the track tools.",
        });
        let message = format!("import guide for {}", spec.importable_type);
        Ok(ToolResult::ok(data, message))
    }

    fn import_dynamic_asset(&mut self, args: &Args) -> Outcome {
        let req = ImportRequest {
            data_type: args.str("data_type")?.to_string(),
            data_source: args.str("data_source")?.to_string(),
            source_type: SourceType::parse(args.str("source_type")?)?,
            file_extension: args.str("file_extension")?.to_string(),
            identifier_hint: args.str("identifier_hint")?.to_string(),
            metadata: args.object("metadata").map(|m| m.clone().into_iter().collect()).unwrap_or_default(),
        };
        let rec = self.assets.import_dynamic_asset(&req)?;
        let data = json!({"identifier": rec.identifier, "asset_kind": rec.asset_kind, "asset": rec.sanitized()});
        Ok(ToolResult::ok(data, format!("imported {} as {}", rec.asset_kind, rec.identifier)))
    }

    // ---- cameras ------------------------------------------------------

    fn add_camera(&mut self, args: &Args) -> Outcome {
        let name = args.str("camera_name")?;
        self.sequence.add_binding(name, BindingKind::Camera, CAMERA_ACTOR, Vec3::ZERO)?;
        Ok(ToolResult::ok(json!({"camera_name": name}), format!("added camera '{name}'")))
    }

    fn set_active_camera(&mut self, args: &Args) -> Outcome {
        let name = args.str("camera_name")?;
        let range = TimeRange::new(args.f64("start_time")?, args.f64("end_time")?)?;
        self.sequence.add_camera_cut(name, range)?;
        let mut data = range_json(range);
        data["camera_name"] = json!(name);
        Ok(ToolResult::ok(
            data,
            format!("'{name}' is active for [{}, {})", round(range.start()), round(range.end())),
        ))
    }

    fn apply_camera_template(&mut self, args: &Args) -> Outcome {
        let camera_name = args.str("camera_name")?;
        let start = args.f64("start_time")?;
        let duration = args.f64("duration")?;
        match self.sequence.binding(camera_name) {
            Some(b) if b.kind == BindingKind::Camera => {}
            _ => return Err(crate::sequence::SequenceError::UnknownCamera(camera_name.to_string()).into()),
        }
        let range = if duration > 0.0 {
            TimeRange::new(start, start + duration)?
        } else {
            return Err(ToolError::InvalidArgument("duration must be > 0".into()));
        };
        let violation = |field: &str, e: camera::CameraError| ToolError::SchemaViolation {
            tool: "apply_camera_template".into(),
            field: field.into(),
            reason: e.to_string(),
        };
        let template = PositionTemplate::parse(args.str("position_template")?)?;
        let position_args = args.get("position_args").cloned().unwrap_or(Value::Null);
        let spec = PositionSpec::parse(template, &position_args).map_err(|e| violation("position_args", e))?;
        let movement = match args.opt_str("movement_template") {
            Some(name) => {
                let movement_args = args.get("movement_args").cloned().unwrap_or(Value::Null);
                let m = MovementTemplate::parse(name)?;
                Some(MovementSpec::parse(m, &movement_args).map_err(|e| violation("movement_args", e))?)
            }
            None if args.object("movement_args").is_some_and(|m| !m.is_empty()) => {
                return Err(ToolError::InvalidArgument("movement_args given without movement_template".into()));
            }
            None => None,
        };
        let actors = spec
            .actor_names()
            .into_iter()
            .map(|n| self.actor_ref(n))
            .collect::<Result<Vec<_>, _>>()?;
        let pose = spec.compute(&actors)?;
        let keyframes = match &movement {
            Some(m) => m.keyframes(&pose, start, duration, self.sequence.frame_rate)?,
            None => Vec::new(),
        };
        let mut description = spec.describe();
        if let Some(m) = &movement {
            description = format!("{description} with {}", m.describe());
        }
        let binding = self.sequence.binding_mut(camera_name).expect("checked above");
        binding.location = pose.position;
        binding.rotation = pose.rotation;
        binding.keyframes = keyframes.clone();
        self.sequence.update_metadata(MetadataBlock {
            binding_name: camera_name.to_string(),
            track: "camera".into(),
            range,
            description: description.clone(),
        });
        let data = json!({
            "camera_name": camera_name,
            "position": pose.position,
            "rotation": pose.rotation,
            "look_target": pose.look_target,
            "keyframe_count": keyframes.len(),
            "start": range.start(),
            "end": range.end(),
            "description": description,
        });
        Ok(ToolResult::ok(data, format!("{camera_name}: {description}")))
    }

    // ---- perception and interaction -----------------------------------

    fn update_sequence_metadata(&mut self, args: &Args) -> Outcome {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Block {
            binding_name: String,
            #[serde(default = "default_track")]
            track: String,
            #[serde(alias = "start")]
            start_time: f64,
            #[serde(alias = "end")]
            end_time: f64,
            description: String,
        }
        fn default_track() -> String {
            "notes".into()
        }
        let raw = args.get("new_block").cloned().unwrap_or(Value::Null);
        let block: Block = serde_json::from_value(raw).map_err(|e| ToolError::SchemaViolation {
            tool: "update_sequence_metadata".into(),
            field: "new_block".into(),
            reason: e.to_string(),
        })?;
        let range = TimeRange::new(block.start_time, block.end_time)?;
        let data = json!({
            "binding_name": block.binding_name,
            "track": block.track,
            "start": range.start(),
            "end": range.end(),
            "description": block.description,
        });
        self.sequence.update_metadata(MetadataBlock {
            binding_name: block.binding_name,
            track: block.track,
            range,
            description: block.description,
        });
        let count = self.sequence.metadata.len();
        Ok(ToolResult::ok(data, format!("metadata block added ({count} total)")))
    }

    fn set_current_sequence_time(&mut self, args: &Args) -> Outcome {
        let time = args.f64("time")?;
        if time < 0.0 {
            return Err(ToolError::InvalidArgument("time must be >= 0".into()));
        }
        self.sequence.current_time = time;
        Ok(ToolResult::ok(json!({"time": time}), format!("playhead at {}", round(time))))
    }

    fn move_view(&mut self, args: &Args) -> Outcome {
        let forward = args.f64("forward")?;
        let horizontal = args.f64("horizontal")?;
        let vertical = args.f64("vertical")?;
        let yaw = args.f64("yaw")?;
        let pitch = args.f64("pitch")?;
        let before = self.viewport;
        let heading = before.rotation.yaw.to_radians();
        let ahead = Vec3::new(heading.cos(), heading.sin(), 0.0);
        let right = Vec3::new(-heading.sin(), heading.cos(), 0.0);
        let location = before.location + ahead * forward + right * horizontal + Vec3::new(0.0, 0.0, vertical);
        let rotation = Rotator::new((before.rotation.pitch + pitch).clamp(-89.0, 89.0), before.rotation.yaw + yaw, 0.0);
        self.viewport = ViewportPose { location, rotation };
        self.viewport_undo = Some(before);
        Ok(ToolResult::ok(json!(self.viewport), "viewport moved"))
    }

    fn undo_move_view(&mut self) -> Outcome {
        let previous = self.viewport_undo.take().ok_or(ToolError::NothingToUndo)?;
        self.viewport = previous;
        Ok(ToolResult::ok(json!(self.viewport), "viewport restored"))
    }

    fn screenshot(&self, args: &Args, camera_name: Option<&str>) -> Outcome {
        let resolution = args.integers("resolution")?;
        if resolution.len() != 2 || resolution.iter().any(|v| *v <= 0) {
            return Err(ToolError::SchemaViolation {
                tool: if camera_name.is_some() { "take_camera_screenshot" } else { "take_editor_screenshot" }.into(),
                field: "resolution".into(),
                reason: "expected [width, height] with positive values".into(),
            });
        }
        let mut data = json!({"supported": false, "resolution": resolution});
        if let Some(name) = camera_name {
            data["camera_name"] = json!(name);
        }
        Ok(ToolResult::ok(data, "screenshots are not supported by the headless engine; no image was captured"))
    }

    // ---- external services --------------------------------------------

    fn get_available_tone(&self, args: &Args) -> Outcome {
        let character = args.str("character_name")?;
        let gender = if character.is_empty() {
            None
        } else {
            self.require_character(character)?;
            let identifier = &self.sequence.binding(character).expect("checked").identifier;
            self.assets.get(identifier).and_then(|r| r.text("gender")).map(str::to_lowercase)
        };
        let tones: Vec<&super::Tone> = self
            .config
            .tones
            .iter()
            .filter(|t| gender.as_deref().is_none_or(|g| t.gender.eq_ignore_ascii_case(g)))
            .collect();
        let count = tones.len();
        Ok(ToolResult::ok(json!({"tones": tones}), format!("{count} tone(s) available")))
    }

    fn tts(&mut self, args: &Args) -> Outcome {
        let identifier = args.str("identifier")?;
        let text = args.str("text")?;
        let tone = args.str("tone")?;
        if text.trim().is_empty() {
            return Err(ToolError::InvalidArgument("text must not be empty".into()));
        }
        if !tone.is_empty() && !self.config.tones.iter().any(|t| t.name == tone) {
            let names: Vec<&str> = self.config.tones.iter().map(|t| t.name.as_str()).collect();
            return Err(ToolError::InvalidArgument(format!("unknown tone '{tone}'; available: {}", names.join(", "))));
        }
        let clip = wav::silent_wav(tts_duration(text));
        let metadata = BTreeMap::from([
            ("speech_text".to_string(), json!(text)),
            ("gender".to_string(), json!(args.str("gender")?)),
            ("tone".to_string(), json!(tone)),
            ("emotion".to_string(), json!(args.str("emotion")?)),
        ]);
        let req = ImportRequest {
            data_type: "audio_wav".into(),
            data_source: base64::engine::general_purpose::STANDARD.encode(&clip),
            source_type: SourceType::Base64,
            file_extension: "wav".into(),
            identifier_hint: identifier.to_string(),
            metadata,
        };
        let rec = self.assets.import_with_identifier(&req, identifier)?;
        let duration = Self::asset_duration(&rec)?;
        Ok(ToolResult::ok(
            json!({"identifier": rec.identifier, "duration": duration}),
            format!("generated '{}' ({} s)", rec.identifier, round(duration)),
        ))
    }

    fn audio_to_face(&mut self, args: &Args) -> Outcome {
        let identifier = args.str("identifier")?;
        let audio_identifier = args.str("audio_identifier")?;
        let emotion = args.str("emotion")?;
        let audio = self.asset_of_kind(audio_identifier, "Audio")?;
        let duration = Self::asset_duration(audio)?;
        let payload = canonical::to_compact(&json!({
            "source_audio": audio_identifier,
            "emotion": emotion,
            "duration": duration,
            "curves": [],
        }));
        let req = ImportRequest {
            data_type: "facial_curve".into(),
            data_source: base64::engine::general_purpose::STANDARD.encode(payload.as_bytes()),
            source_type: SourceType::Base64,
            file_extension: "json".into(),
            identifier_hint: identifier.to_string(),
            metadata: BTreeMap::from([
                ("duration".to_string(), json!(duration)),
                ("source_audio".to_string(), json!(audio_identifier)),
                ("emotion".to_string(), json!(emotion)),
            ]),
        };
        let rec = self.assets.import_with_identifier(&req, identifier)?;
        Ok(ToolResult::ok(
            json!({"identifier": rec.identifier, "audio_identifier": audio_identifier, "duration": duration}),
            format!("generated facial animation '{}' from '{audio_identifier}'", rec.identifier),
        ))
    }

    fn video_understanding(&self, args: &Args) -> Outcome {
        let data = json!({
            "video_identifier": args.str("video_identifier")?,
            "task_description": args.str("task_description")?,
            "supported": false,
            "observations": [],
            "summary": "Video analysis is not available in the headless engine; no observations were made.",
        });
        Ok(ToolResult::ok(data, "video analysis is not available; returned an empty report"))
    }
}
