//! Model backends: a deterministic script player for tests and replays, and
//! a chat-completions client for live runs.

use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::context::{Message, Role};
use crate::AgentError;

/// Everything a model sees on one turn.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelRequest {
    pub system_prompt: String,
    pub messages: Vec<Message>,
    /// Tool descriptors (`name`, `description`, `inputSchema`).
    pub tools: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolIntent {
    pub tool: String,
    #[serde(default)]
    pub args: Value,
    /// Script for the subagent a `run_subagent` intent spawns (scripted
    /// backend only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subagent_script: Option<Vec<ScriptStep>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Turn {
    Tools(Vec<ToolIntent>),
    Final(String),
}

pub trait ModelBackend {
    fn respond(&mut self, request: &ModelRequest) -> Result<Turn, AgentError>;

    /// Backend for a subagent spawned by `intent`.
    fn spawn_subagent(&mut self, intent: &ToolIntent) -> Result<Box<dyn ModelBackend>, AgentError>;
}

/// One line of `script.json`: a tool intent or `{"final": text}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScriptStep {
    Final {
        #[serde(rename = "final")]
        text: String,
    },
    Call(ToolIntent),
}

/// Plays a script one step per turn. An exhausted script finishes with an
/// empty final message.
#[derive(Debug, Clone, Default)]
pub struct ScriptedBackend {
    steps: Vec<ScriptStep>,
    cursor: usize,
}

impl ScriptedBackend {
    pub fn new(steps: Vec<ScriptStep>) -> Self {
        Self { steps, cursor: 0 }
    }

    pub fn parse(text: &str) -> Result<Self, AgentError> {
        let steps: Vec<ScriptStep> =
            serde_json::from_str(text).map_err(|e| AgentError::Script(format!("bad script: {e}")))?;
        Ok(Self::new(steps))
    }

    pub fn load(path: &Path) -> Result<Self, AgentError> {
        let text = std::fs::read_to_string(path).map_err(|e| AgentError::Script(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// A script that issues `calls` in order, then finishes.
    pub fn from_calls<'a>(calls: impl IntoIterator<Item = (&'a str, &'a Value)>) -> Self {
        Self::new(
            calls
                .into_iter()
                .map(|(tool, args)| {
                    ScriptStep::Call(ToolIntent {
                        tool: tool.to_string(),
                        args: args.clone(),
                        subagent_script: None,
                    })
                })
                .collect(),
        )
    }

    pub fn remaining(&self) -> usize {
        self.steps.len() - self.cursor
    }
}

impl ModelBackend for ScriptedBackend {
    fn respond(&mut self, _request: &ModelRequest) -> Result<Turn, AgentError> {
        let Some(step) = self.steps.get(self.cursor) else {
            return Ok(Turn::Final(String::new()));
        };
        self.cursor += 1;
        Ok(match step {
            ScriptStep::Final { text } => Turn::Final(text.clone()),
            ScriptStep::Call(intent) => Turn::Tools(vec![intent.clone()]),
        })
    }

    fn spawn_subagent(&mut self, intent: &ToolIntent) -> Result<Box<dyn ModelBackend>, AgentError> {
        Ok(Box::new(ScriptedBackend::new(intent.subagent_script.clone().unwrap_or_default())))
    }
}

/// Connection settings for an OpenAI-style chat-completions endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiveConfig {
    /// Full URL of the chat-completions endpoint.
    pub endpoint: String,
    pub model: String,
    /// Environment variable holding the API key.
    #[serde(default = "default_key_env")]
    pub api_key_env: String,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
    #[serde(default)]
    pub temperature: Option<f64>,
}

fn default_key_env() -> String {
    "CUTSCENE_API_KEY".into()
}

fn default_timeout() -> u64 {
    120
}

pub struct LiveBackend {
    config: LiveConfig,
    key: String,
    agent: ureq::Agent,
}

impl LiveBackend {
    pub fn new(config: LiveConfig) -> Result<Self, AgentError> {
        let key = std::env::var(&config.api_key_env)
            .map_err(|_| AgentError::Backend(format!("environment variable {} is not set", config.api_key_env)))?;
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
            .build()
            .new_agent();
        Ok(Self { config, key, agent })
    }

    fn body(&self, request: &ModelRequest) -> Value {
        let mut messages = vec![json!({"role": "system", "content": request.system_prompt})];
        messages.extend(request.messages.iter().map(|m| {
            let role = match m.role {
                Role::User => "user",
                Role::Assistant => "assistant",
            };
            json!({"role": role, "content": m.content})
        }));
        let tools: Vec<Value> = request
            .tools
            .iter()
            .map(|t| {
                json!({"type": "function", "function": {
                    "name": t["name"],
                    "description": t["description"],
                    "parameters": t["inputSchema"],
                }})
            })
            .collect();
        let mut body = json!({"model": self.config.model, "messages": messages});
        if !tools.is_empty() {
            body["tools"] = json!(tools);
        }
        if let Some(t) = self.config.temperature {
            body["temperature"] = json!(t);
        }
        body
    }
}

/// Extract a turn from a chat-completions response body.
pub fn parse_completion(response: &Value) -> Result<Turn, AgentError> {
    let message = response
        .pointer("/choices/0/message")
        .ok_or_else(|| AgentError::Backend("response has no choices[0].message".into()))?;
    if let Some(Value::Array(calls)) = message.get("tool_calls") {
        if !calls.is_empty() {
            let intents = calls
                .iter()
                .map(|c| {
                    let name = c.pointer("/function/name").and_then(Value::as_str).unwrap_or_default();
                    let raw = c.pointer("/function/arguments").and_then(Value::as_str).unwrap_or("{}");
                    let args = serde_json::from_str(raw)
                        .map_err(|e| AgentError::Backend(format!("tool '{name}' arguments are not JSON: {e}")))?;
                    Ok(ToolIntent {
                        tool: name.to_string(),
                        args,
                        subagent_script: None,
                    })
                })
                .collect::<Result<Vec<_>, AgentError>>()?;
            return Ok(Turn::Tools(intents));
        }
    }
    Ok(Turn::Final(message.get("content").and_then(Value::as_str).unwrap_or_default().to_string()))
}

impl ModelBackend for LiveBackend {
    fn respond(&mut self, request: &ModelRequest) -> Result<Turn, AgentError> {
        let body = self.body(request);
        let mut response = self
            .agent
            .post(&self.config.endpoint)
            .header("authorization", &format!("Bearer {}", self.key))
            .send_json(&body)
            .map_err(|e| AgentError::Backend(e.to_string()))?;
        let value: Value = response.body_mut().read_json().map_err(|e| AgentError::Backend(e.to_string()))?;
        parse_completion(&value)
    }

    fn spawn_subagent(&mut self, _intent: &ToolIntent) -> Result<Box<dyn ModelBackend>, AgentError> {
        Ok(Box::new(LiveBackend {
            config: self.config.clone(),
            key: self.key.clone(),
            agent: self.agent.clone(),
        }))
    }
}
