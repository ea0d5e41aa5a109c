//! Director prompt elements and the preset specialist templates.

use cutscene_core::toolkit::Toolkit;
use serde::Serialize;

use crate::prompt::PromptElement;
use crate::AgentError;

pub const PRIORITY_CORE: i64 = 1000;
pub const PRIORITY_PROJECT: i64 = 850;
pub const PRIORITY_TOOL_USAGE: i64 = 900;
pub const PRIORITY_RULES: i64 = 800;
pub const PRIORITY_DELEGATION: i64 = 750;

/// Turn cap for custom subagents when the caller gives none.
pub const CUSTOM_MAX_TURNS: u32 = 15;

const IDENTITY: &str = "You are a language model working as a cutscene director. \
You build editable cinematic sequences by calling tools; the sequence you leave behind is the deliverable.";

const SAFETY: &str = "Follow the content policy. Decline to stage material that is hateful, sexual involving minors, \
or that gives operational help for violence; keep dialogue and performances appropriate to the script's rating.";

const DIRECTOR_ROLE: &str = "Read the script, plan the shots, and build the sequence. \
Hand self-contained pieces of work to specialists with run_subagent and check their summaries before moving on.";

const TOOL_USAGE: &str = "Call one tool at a time and read its result before the next call. \
Create a thing before you refer to it: characters before their tracks, audio before facial curves, cameras before cuts. \
Discover identifiers with the catalog tools rather than guessing them.";

const CREATION: &str = "Work in this order: place characters, generate speech and facial curves, \
lay in body animation, then add cameras and templates. \
The current sequence is shown in the current_cutscene_content block every turn; \
build on what is already there instead of starting over.";

const ACTOR_RULES: &str = "Two characters in conversation: first at (-60, 0, 0), second at (60, 0, 0). \
Three characters in a triangle: (-60, 0, 0), (30, -52, 0), (30, 52, 0). \
Call orient_character_to_center with every placed name afterwards. \
Side by side spacing is about 70 cm, front to back about 40 cm.";

const AUDIO_RULES: &str = "Give each character one voice tone and keep it for the whole scene. \
Speak only dialogue, never narration or stage directions. \
An audio section ends at start_time plus the duration reported by tts_function_tool.";

const ANIMATION_RULES: &str = "Animations are tagged by timing (Speak, Gap, Solo), expressiveness (Light, Medium, Heavy), \
mood and duration. Pick clips long enough to cover the line they accompany. \
Sections on one character's animation track must not overlap.";

const CAMERA_RULES: &str = "Position cameras with apply_camera_template. \
OTS variants near, mid and high trade intimacy for context. \
Dolly pushes in or pulls out, Orbit arcs around the subject. \
Vary the shot type between consecutive cuts.";

const TOOL_RULES: &str = "Respect dependencies between calls: discovery before use, creation before reference. \
Never retry a failing call unchanged; read the error's suggestions first.";

const DELEGATION: &str = "run_subagent(template_name, task, context, custom_instructions, custom_tool_scope) starts a specialist \
with its own conversation and a restricted tool list. Presets: Scene Specialist, Animation Specialist, Cinematographer, \
Sound Designer, Photographer. Use template_name \"custom\" with instructions and a tool scope for anything else. \
The call returns JSON with status, template_name, tool_calls_count, tool_calls, result_summary and turns_used.";

/// Elements of the director's system prompt. A non-empty project context
/// fetched from the server is added as its own block.
pub fn director_elements(project_context: &str) -> Vec<PromptElement> {
    let mut elements = vec![
        PromptElement::instruction(PRIORITY_CORE, IDENTITY),
        PromptElement::instruction(PRIORITY_CORE, SAFETY),
        PromptElement::instruction(PRIORITY_CORE, DIRECTOR_ROLE),
        PromptElement::text(PRIORITY_TOOL_USAGE, TOOL_USAGE),
        PromptElement::block(PRIORITY_RULES, "cutscene_creation", CREATION),
        PromptElement::block(PRIORITY_RULES, "actor_rules", ACTOR_RULES),
        PromptElement::block(PRIORITY_RULES, "audio_rules", AUDIO_RULES),
        PromptElement::block(PRIORITY_RULES, "animation_rules", ANIMATION_RULES),
        PromptElement::block(PRIORITY_RULES, "camera_rules", CAMERA_RULES),
        PromptElement::block(PRIORITY_RULES, "tool_usage", TOOL_RULES),
        PromptElement::text(PRIORITY_DELEGATION, DELEGATION),
    ];
    if !project_context.trim().is_empty() {
        elements.push(PromptElement::block(PRIORITY_PROJECT, "project_context", project_context.trim()));
    }
    elements
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubAgentTemplate {
    pub name: String,
    pub system_prompt: String,
    pub tool_whitelist: Vec<String>,
    pub max_turns: u32,
}

impl SubAgentTemplate {
    pub fn new(name: &str, system_prompt: String, tools: &[&str], max_turns: u32) -> Result<Self, AgentError> {
        if max_turns == 0 {
            return Err(AgentError::InvalidTemplate(format!("{name}: max_turns must be positive")));
        }
        if tools.is_empty() {
            return Err(AgentError::InvalidTemplate(format!("{name}: empty tool whitelist")));
        }
        let known = Toolkit::tool_names();
        if let Some(bad) = tools.iter().find(|t| !known.contains(t)) {
            return Err(AgentError::InvalidTemplate(format!("{name}: unknown tool '{bad}'")));
        }
        Ok(Self {
            name: name.to_string(),
            system_prompt,
            tool_whitelist: tools.iter().map(|t| t.to_string()).collect(),
            max_turns,
        })
    }
}

fn preset_prompt(role: &str, rules: &[(&str, &str)]) -> String {
    let mut elements = vec![PromptElement::instruction(PRIORITY_CORE, role)];
    elements.extend(rules.iter().map(|(tag, body)| PromptElement::block(PRIORITY_RULES, *tag, *body)));
    crate::prompt::PromptManager::new().extend(elements).assemble(usize::MAX)
}

pub const PRESET_NAMES: [&str; 5] = [
    "Scene Specialist",
    "Animation Specialist",
    "Cinematographer",
    "Sound Designer",
    "Photographer",
];

pub fn preset(name: &str) -> Option<SubAgentTemplate> {
    let (prompt, tools, turns): (String, &[&str], u32) = match name {
        "Scene Specialist" => (
            preset_prompt(
                "You place characters for the director: add them at the requested spots and turn them toward each other.",
                &[("actor_rules", ACTOR_RULES)],
            ),
            &["add_character", "orient_character_to_center", "get_available_characters"],
            20,
        ),
        "Animation Specialist" => (
            preset_prompt(
                "You choose body animations. Match each clip's mood to the line and its length to the line's duration.",
                &[("animation_rules", ANIMATION_RULES)],
            ),
            &["add_character_animation", "get_available_animations"],
            30,
        ),
        "Cinematographer" => (
            preset_prompt(
                "You shoot the scene. Open with an establishing shot, cover dialogue with alternating \
                 over-the-shoulder shots, and assign every camera a range on the cut track.",
                &[("camera_rules", CAMERA_RULES)],
            ),
            &["add_camera", "set_active_camera", "apply_camera_template", "get_available_camera_templates"],
            25,
        ),
        "Sound Designer" => (
            preset_prompt(
                "You voice the dialogue: synthesize each line, attach it to its speaker, \
                 and derive a matching facial curve from the same audio.",
                &[("audio_rules", AUDIO_RULES)],
            ),
            &[
                "tts_function_tool",
                "add_character_audio",
                "audio_to_face_expression_tool",
                "add_character_facial_animation",
                "get_available_tone",
            ],
            30,
        ),
        "Photographer" => (
            preset_prompt(
                "You refine framing from the editor viewport. Screenshots may be unsupported in headless mode; \
                 report that instead of guessing.",
                &[("camera_rules", CAMERA_RULES)],
            ),
            &["move_view", "undo_move_view", "take_editor_screenshot"],
            10,
        ),
        _ => return None,
    };
    Some(SubAgentTemplate::new(name, prompt, tools, turns).expect("preset templates are valid"))
}

pub fn custom(instructions: &str, scope: &[String], max_turns: Option<u32>) -> Result<SubAgentTemplate, AgentError> {
    if instructions.trim().is_empty() {
        return Err(AgentError::InvalidTemplate("custom subagents need custom_instructions".into()));
    }
    if scope.is_empty() {
        return Err(AgentError::InvalidTemplate("custom subagents need a custom_tool_scope".into()));
    }
    let tools: Vec<&str> = scope.iter().map(String::as_str).collect();
    SubAgentTemplate::new("custom", instructions.trim().to_string(), &tools, max_turns.unwrap_or(CUSTOM_MAX_TURNS))
}
