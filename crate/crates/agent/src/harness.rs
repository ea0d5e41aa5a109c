//! The director loop and subagent delegation.
//!
//! Each director turn runs: inject state, ask the model, execute tools,
//! compress history, check for completion.

use cutscene_core::toolkit::{director_scope, Status, ToolResult};
use cutscene_core::trajectory::ToolCallRecord;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::backend::{ModelBackend, ModelRequest, ToolIntent, Turn};
use crate::context::{inject_state, Conversation, HistoryEntry, DEFAULT_KEEP_RECENT};
use crate::prompt::PromptManager;
use crate::templates::{self, SubAgentTemplate};
use crate::transport::{Mcp, McpTransport};
use crate::AgentError;

pub const RUN_SUBAGENT: &str = "run_subagent";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    pub max_turns: u32,
    pub token_budget: usize,
    pub keep_recent: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            max_turns: 200,
            token_budget: 8000,
            keep_recent: DEFAULT_KEEP_RECENT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    TurnLimit,
}

/// One call made by a subagent, as reported back to the director.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubAgentCall {
    pub tool: String,
    pub args: Value,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubAgentResult {
    pub status: RunStatus,
    pub template_name: String,
    pub tool_calls_count: usize,
    pub tool_calls: Vec<SubAgentCall>,
    pub result_summary: String,
    pub turns_used: u32,
    pub whitelist_violations: usize,
}

/// A finished subagent run with the session it used and every request its
/// model saw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubAgentRun {
    pub session_id: String,
    pub result: SubAgentResult,
    pub transcript: Vec<ModelRequest>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectorOutcome {
    pub status: RunStatus,
    pub final_message: String,
    pub turns_used: u32,
    pub session_id: String,
    /// Every call recorded by the server during the run, subagents included.
    pub trajectory: Vec<ToolCallRecord>,
    pub transcript: Vec<ModelRequest>,
    pub subagents: Vec<SubAgentRun>,
}

/// Arguments of the local `run_subagent` tool.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubAgentRequest {
    pub template_name: String,
    pub task: String,
    #[serde(default)]
    pub context: String,
    #[serde(default)]
    pub custom_instructions: String,
    #[serde(default)]
    pub custom_tool_scope: Vec<String>,
    /// Turn cap for custom subagents.
    #[serde(default)]
    pub max_turns: Option<u32>,
}

pub fn run_subagent_schema() -> Value {
    json!({
        "name": RUN_SUBAGENT,
        "description": "Delegate a task to a specialist subagent with its own conversation and restricted tools.",
        "inputSchema": {
            "type": "object",
            "properties": {
                "template_name": {"type": "string", "description": "Preset name or \"custom\""},
                "task": {"type": "string"},
                "context": {"type": "string"},
                "custom_instructions": {"type": "string"},
                "custom_tool_scope": {"type": "array", "items": {"type": "string"}},
                "max_turns": {"type": "integer", "minimum": 1},
            },
            "required": ["template_name", "task"],
            "additionalProperties": false,
        },
        "annotations": {"mutation": true},
    })
}

pub struct Harness<'t> {
    mcp: Mcp<'t>,
    config: HarnessConfig,
}

impl<'t> Harness<'t> {
    pub fn new(transport: &'t mut dyn McpTransport, config: HarnessConfig) -> Self {
        Self {
            mcp: Mcp::new(transport),
            config,
        }
    }

    pub fn config(&self) -> &HarnessConfig {
        &self.config
    }

    /// Run the director on `script` until the model finishes or the turn
    /// cap is hit. Tool failures go back to the model; transport and
    /// backend failures abort the run.
    pub fn run_director(&mut self, script: &str, backend: &mut dyn ModelBackend) -> Result<DirectorOutcome, AgentError> {
        let first_index = self.mcp.trajectory(None)?.len();
        let project_context = self.mcp.project_context()?;
        let system_prompt = PromptManager::new()
            .extend(templates::director_elements(&project_context))
            .assemble(self.config.token_budget);
        let scope: Vec<String> = director_scope().into_iter().map(str::to_string).collect();
        let session = self.mcp.open_session(Some(&scope), "director")?;
        let mut tools = self.mcp.list_tools(Some(&session))?;
        tools.push(run_subagent_schema());

        let mut conversation = Conversation::new(script);
        let mut transcript = Vec::new();
        let mut subagents = Vec::new();
        let mut turns = 0;
        let mut final_message = None;
        while turns < self.config.max_turns {
            turns += 1;
            let state = self.mcp.sequence_state(Some(&session))?;
            inject_state(&mut conversation, &state);
            let request = ModelRequest {
                system_prompt: system_prompt.clone(),
                messages: conversation.messages(),
                tools: tools.clone(),
            };
            let turn = backend.respond(&request)?;
            transcript.push(request);
            match turn {
                Turn::Final(text) => {
                    final_message = Some(text);
                    break;
                }
                Turn::Tools(intents) => {
                    for intent in intents {
                        let entry = if intent.tool == RUN_SUBAGENT {
                            let (result, run) = self.delegate(&intent, backend)?;
                            subagents.extend(run);
                            let record = ToolCallRecord::new(0, RUN_SUBAGENT, &intent.args, result.status);
                            HistoryEntry::new(record, result.to_value())
                        } else {
                            let result = self.mcp.call_tool(Some(&session), &intent.tool, &intent.args)?;
                            let record = ToolCallRecord::new(0, &intent.tool, &intent.args, result.status);
                            HistoryEntry::new(record, result.to_value())
                        };
                        conversation.push_call(entry);
                    }
                }
            }
            conversation.compress(self.config.keep_recent);
        }
        self.mcp.close_session(&session)?;
        let trajectory = self.mcp.trajectory(None)?.split_off(first_index);
        Ok(DirectorOutcome {
            status: if final_message.is_some() {
                RunStatus::Completed
            } else {
                RunStatus::TurnLimit
            },
            final_message: final_message.unwrap_or_default(),
            turns_used: turns,
            session_id: session,
            trajectory,
            transcript,
            subagents,
        })
    }

    fn delegate(
        &mut self,
        intent: &ToolIntent,
        backend: &mut dyn ModelBackend,
    ) -> Result<(ToolResult, Option<SubAgentRun>), AgentError> {
        let request: SubAgentRequest = match serde_json::from_value(intent.args.clone()) {
            Ok(r) => r,
            Err(e) => return Ok((delegation_error("schema_violation", &e.to_string()), None)),
        };
        let mut sub_backend = backend.spawn_subagent(intent)?;
        match self.run_subagent(&request, sub_backend.as_mut()) {
            Ok(run) => {
                let data = serde_json::to_value(&run.result).expect("result serializes");
                Ok((ToolResult::ok(data, run.result.result_summary.clone()), Some(run)))
            }
            Err(AgentError::UnknownTemplate(name)) => {
                Ok((delegation_error("unknown_template", &format!("unknown subagent template '{name}'")), None))
            }
            Err(AgentError::InvalidTemplate(msg)) => Ok((delegation_error("invalid_argument", &msg), None)),
            Err(e) => Err(e),
        }
    }

    /// Run one subagent in a fresh conversation restricted, on the server
    /// side, to the template's whitelist.
    pub fn run_subagent(
        &mut self,
        request: &SubAgentRequest,
        backend: &mut dyn ModelBackend,
    ) -> Result<SubAgentRun, AgentError> {
        let template = resolve_template(request)?;
        let session = self.mcp.open_session(Some(&template.tool_whitelist), &template.name)?;
        let tools = self.mcp.list_tools(Some(&session))?;
        let mut task = request.task.clone();
        if !request.context.trim().is_empty() {
            task = format!("{task}\n\n<context>\n{}\n</context>", request.context.trim());
        }
        let mut conversation = Conversation::new(task);
        let mut transcript = Vec::new();
        let mut calls = Vec::new();
        let mut violations = 0;
        let mut turns = 0;
        let mut summary = None;
        while turns < template.max_turns {
            turns += 1;
            let state = self.mcp.sequence_state(Some(&session))?;
            inject_state(&mut conversation, &state);
            let model_request = ModelRequest {
                system_prompt: template.system_prompt.clone(),
                messages: conversation.messages(),
                tools: tools.clone(),
            };
            let turn = backend.respond(&model_request)?;
            transcript.push(model_request);
            match turn {
                Turn::Final(text) => {
                    summary = Some(text);
                    break;
                }
                Turn::Tools(intents) => {
                    for intent in intents {
                        let result = self.mcp.call_tool(Some(&session), &intent.tool, &intent.args)?;
                        if result.data.get("error").and_then(Value::as_str) == Some("tool_not_permitted") {
                            violations += 1;
                        }
                        calls.push(SubAgentCall {
                            tool: intent.tool.clone(),
                            args: intent.args.clone(),
                            status: result.status,
                        });
                        let record = ToolCallRecord::new(0, &intent.tool, &intent.args, result.status);
                        conversation.push_call(HistoryEntry::new(record, result.to_value()));
                    }
                }
            }
            conversation.compress(self.config.keep_recent);
        }
        self.mcp.close_session(&session)?;
        let status = if summary.is_some() {
            RunStatus::Completed
        } else {
            RunStatus::TurnLimit
        };
        let result_summary = match summary {
            Some(text) if !text.is_empty() => text,
            Some(_) => format!("finished after {} tool calls", calls.len()),
            None => format!("turn limit of {} reached after {} tool calls", template.max_turns, calls.len()),
        };
        Ok(SubAgentRun {
            session_id: session,
            result: SubAgentResult {
                status,
                template_name: request.template_name.clone(),
                tool_calls_count: calls.len(),
                tool_calls: calls,
                result_summary,
                turns_used: turns,
                whitelist_violations: violations,
            },
            transcript,
        })
    }
}

fn resolve_template(request: &SubAgentRequest) -> Result<SubAgentTemplate, AgentError> {
    if request.template_name == "custom" {
        return templates::custom(&request.custom_instructions, &request.custom_tool_scope, request.max_turns);
    }
    templates::preset(&request.template_name).ok_or_else(|| AgentError::UnknownTemplate(request.template_name.clone()))
}

fn delegation_error(code: &str, message: &str) -> ToolResult {
    ToolResult {
        status: Status::Error,
        data: json!({"error": code}),
        message: message.to_string(),
    }
}
