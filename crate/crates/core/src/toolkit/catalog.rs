//! The closed registry of tool schemas.

use std::sync::OnceLock;

use serde_json::json;

use super::schema::{ParamSpec, ParamType, ToolSchema};

use ParamType::*;

fn req(name: &'static str, ty: ParamType, description: &'static str) -> ParamSpec {
    ParamSpec::required(name, ty, description)
}

fn opt(name: &'static str, ty: ParamType, default: serde_json::Value, description: &'static str) -> ParamSpec {
    ParamSpec::optional(name, ty, Some(default), description)
}

fn maybe(name: &'static str, ty: ParamType, description: &'static str) -> ParamSpec {
    ParamSpec::optional(name, ty, None, description)
}

fn tool(name: &'static str, mutation: bool, description: &'static str, parameters: Vec<ParamSpec>) -> ToolSchema {
    ToolSchema {
        name,
        description,
        parameters,
        mutation,
    }
}

/// Tools kept away from the director: destructive or renderer-bound.
pub const DIRECTOR_EXCLUDED: [&str; 3] = ["clear_sequence", "take_editor_screenshot", "take_camera_screenshot"];

pub fn all() -> &'static [ToolSchema] {
    static SCHEMAS: OnceLock<Vec<ToolSchema>> = OnceLock::new();
    SCHEMAS.get_or_init(build)
}

pub fn find(name: &str) -> Option<&'static ToolSchema> {
    all().iter().find(|s| s.name == name)
}

pub fn names() -> Vec<&'static str> {
    all().iter().map(|s| s.name).collect()
}

/// Every tool the director may call.
pub fn director_scope() -> Vec<&'static str> {
    names().into_iter().filter(|n| !DIRECTOR_EXCLUDED.contains(n)).collect()
}

fn build() -> Vec<ToolSchema> {
    let resolution = || opt("resolution", IntegerList, json!([1280, 720]), "Image size [width, height]");
    vec![
        // Characters and tracks
        tool(
            "add_character",
            true,
            "Spawn a character from the Characters asset table and bind it to the sequence.",
            vec![
                req("name", String, "Binding name used by every later call"),
                req("identifier", String, "Character asset identifier, e.g. char_001"),
                opt("location", Vec3, json!([0.0, 0.0, 0.0]), "World location [x, y, z] in cm; z below 0 snaps to the ground"),
                maybe(
                    "orientation",
                    String,
                    "face_north | face_east | face_south | face_west | face_character:<name> | turn_left_<deg> | turn_right_<deg>",
                ),
            ],
        ),
        tool(
            "orient_character_to_center",
            true,
            "Turn each named character to face the centroid of the group.",
            vec![req("names", StringList, "Two or more bound character names")],
        ),
        tool(
            "orient_character",
            true,
            "Set a character's facing with a semantic descriptor.",
            vec![
                req("name", String, "Bound character name"),
                req(
                    "orientation",
                    String,
                    "face_north | face_east | face_south | face_west | face_character:<name> | turn_left_<deg> | turn_right_<deg>",
                ),
            ],
        ),
        tool(
            "add_character_animation",
            true,
            "Add a body animation section; its length is the animation's duration.",
            vec![
                req("character_name", String, "Bound character name"),
                req("identifier", String, "Animation asset identifier"),
                req("start_time", Number, "Section start in seconds"),
            ],
        ),
        tool(
            "add_character_audio",
            true,
            "Add an audio section with optional speech text.",
            vec![
                req("character_name", String, "Bound character name"),
                req("identifier", String, "Audio asset identifier"),
                req("start_time", Number, "Section start in seconds"),
                req("end_time", Number, "Section end in seconds (start + audio duration)"),
                opt("speech_text", String, json!(""), "Spoken line"),
            ],
        ),
        tool(
            "add_character_facial_animation",
            true,
            "Add a facial animation section; its length is the facial asset's duration.",
            vec![
                req("character_name", String, "Bound character name"),
                req("identifier", String, "Facial animation asset identifier"),
                req("start_time", Number, "Section start in seconds"),
                opt("gender", String, json!("male"), "Accepted for compatibility and ignored").one_of(&["male", "female"]),
            ],
        ),
        tool(
            "check_character_collisions",
            false,
            "List pairs of characters whose capsules overlap.",
            vec![maybe("time", Number, "Time to check; defaults to the current sequence time")],
        ),
        // Asset queries
        tool("get_queryable_asset_types", false, "List asset types that can be queried.", vec![]),
        tool(
            "get_query_instruction",
            false,
            "Describe the filterable fields of an asset type and the filter syntax.",
            vec![req("asset_type", String, "Asset type name")],
        ),
        tool(
            "query_assets",
            false,
            "Query assets of one type. Filters map field names to expressions: text, /regex/ or >=number.",
            vec![
                req("asset_type", String, "Asset type name"),
                maybe("filters", Object, "Field -> filter expression; all filters must match"),
                opt("include_generated", String, json!("auto"), "Whether to include imported assets")
                    .one_of(&["auto", "only", "never"]),
            ],
        ),
        tool("get_available_characters", false, "List every character asset.", vec![]),
        tool(
            "get_available_animations",
            false,
            "List body animations for one skeleton gender.",
            vec![opt("gender", String, json!("male"), "Skeleton gender").one_of(&["male", "female"])],
        ),
        // Dynamic import
        tool("get_importable_asset_types", false, "List importable data types with their extensions.", vec![]),
        tool(
            "get_import_guide",
            false,
            "Describe one importable type: recommended metadata and import behavior.",
            vec![req("data_type", String, "Importable type name")],
        ),
        tool(
            "import_dynamic_asset",
            true,
            "Import a generated asset and register it for querying and use.",
            vec![
                req("data_type", String, "Importable type name"),
                req("data_source", String, "Base64 payload, file path or URL"),
                req("source_type", String, "How to read data_source").one_of(&["base64", "file_path", "url"]),
                req("file_extension", String, "File extension of the payload"),
                opt("identifier_hint", String, json!(""), "Readable part of the generated identifier"),
                maybe("metadata", Object, "Searchable metadata stored with the asset"),
            ],
        ),
        // Cameras
        tool(
            "add_camera",
            true,
            "Add a cine camera binding.",
            vec![req("camera_name", String, "Camera binding name")],
        ),
        tool(
            "set_active_camera",
            true,
            "Cut to a camera for a time range.",
            vec![
                req("camera_name", String, "Camera binding name"),
                req("start_time", Number, "Cut start in seconds"),
                req("end_time", Number, "Cut end in seconds"),
            ],
        ),
        tool(
            "get_available_camera_templates",
            false,
            "List position and movement templates with their parameters.",
            vec![],
        ),
        tool(
            "apply_camera_template",
            true,
            "Place a camera with a position template, optionally add movement, and record the shot description.",
            vec![
                req("camera_name", String, "Camera binding name"),
                req("position_template", String, "Position template").one_of(&[
                    "OTS",
                    "POV",
                    "OnAxis",
                    "SideProfile",
                    "Establishing",
                    "GenericFocus",
                ]),
                req("position_args", Object, "Arguments of the position template"),
                maybe("movement_template", String, "Movement template").one_of(&["Dolly", "Orbit"]),
                maybe("movement_args", Object, "Arguments of the movement template"),
                req("start_time", Number, "Shot start in seconds"),
                req("duration", Number, "Shot length in seconds"),
            ],
        ),
        // Perception and interaction
        tool(
            "update_sequence_metadata",
            true,
            "Append a semantic metadata block {binding_name, track, start_time, end_time, description}.",
            vec![req("new_block", Object, "Metadata block")],
        ),
        tool("get_sequence_content", false, "Full structured state of the sequence.", vec![]),
        tool("clear_sequence", true, "Remove every binding, cut and metadata block.", vec![]),
        tool(
            "set_current_sequence_time",
            true,
            "Move the playhead.",
            vec![req("time", Number, "Time in seconds")],
        ),
        tool(
            "move_view",
            true,
            "Move the editor viewport: forward/horizontal on the ground plane, vertical along world up, then rotate.",
            vec![
                opt("forward", Number, json!(0.0), "cm along the view direction projected on the ground"),
                opt("horizontal", Number, json!(0.0), "cm to the right"),
                opt("vertical", Number, json!(0.0), "cm up"),
                opt("yaw", Number, json!(0.0), "Degrees to turn right"),
                opt("pitch", Number, json!(0.0), "Degrees to tilt up"),
            ],
        ),
        tool("undo_move_view", true, "Restore the viewport pose before the last move.", vec![]),
        tool("take_editor_screenshot", false, "Capture the editor viewport.", vec![resolution()]),
        tool(
            "take_camera_screenshot",
            false,
            "Capture the view through a camera.",
            vec![req("camera_name", String, "Camera binding name"), resolution()],
        ),
        // External services
        tool(
            "get_available_tone",
            false,
            "List voice tones, optionally only those matching a character's gender.",
            vec![opt("character_name", String, json!(""), "Bound character name")],
        ),
        tool(
            "tts_function_tool",
            true,
            "Synthesize speech and register it as an audio asset under the given identifier.",
            vec![
                req("identifier", String, "Identifier for the new audio asset"),
                req("text", String, "Line to speak"),
                opt("gender", String, json!("male"), "Voice gender").one_of(&["male", "female"]),
                opt("tone", String, json!(""), "Tone from get_available_tone"),
                opt("emotion", String, json!("normal"), "Emotion of the delivery"),
            ],
        ),
        tool(
            "audio_to_face_expression_tool",
            true,
            "Generate facial animation from an audio asset and register it under the given identifier.",
            vec![
                req("identifier", String, "Identifier for the new facial asset"),
                req("audio_identifier", String, "Source audio asset"),
                opt("emotion", String, json!("neutral"), "Emotion of the expression"),
            ],
        ),
        tool(
            "video_understanding_tool",
            false,
            "Analyse a rendered video.",
            vec![
                req("video_identifier", String, "Video asset identifier"),
                req("task_description", String, "What to look for"),
            ],
        ),
    ]
}
