//! JSON-RPC 2.0 method dispatch, shared by every transport.

use cutscene_core::canonical;
use cutscene_core::toolkit::Status;
use serde_json::{json, Value};

use crate::executor::{ExecError, ExecutorHandle, SessionSpec};

pub const PARSE_ERROR: i64 = -32700;
pub const INVALID_REQUEST: i64 = -32600;
pub const METHOD_NOT_FOUND: i64 = -32601;
pub const INVALID_PARAMS: i64 = -32602;
pub const INTERNAL_ERROR: i64 = -32603;

pub const PROTOCOL_VERSION: &str = "2024-11-05";

#[derive(Debug, Clone, Default)]
pub struct ServerConfig {
    /// Text returned by `prompts/project_context`.
    pub project_context: String,
}

#[derive(Debug, Clone)]
pub struct RpcHandler {
    exec: ExecutorHandle,
    config: ServerConfig,
}

fn error_response(id: Value, code: i64, message: impl Into<String>) -> Value {
    json!({"jsonrpc": "2.0", "id": id, "error": {"code": code, "message": message.into()}})
}

fn exec_error(id: Value, e: ExecError) -> Value {
    let code = match e {
        ExecError::Stopped => INTERNAL_ERROR,
        _ => INVALID_PARAMS,
    };
    error_response(id, code, e.to_string())
}

impl RpcHandler {
    pub fn new(exec: ExecutorHandle, config: ServerConfig) -> Self {
        Self { exec, config }
    }

    pub fn executor(&self) -> &ExecutorHandle {
        &self.exec
    }

    /// Handle one raw frame. Returns `None` for notifications.
    pub fn handle_text(&self, text: &str) -> Option<String> {
        let response = match serde_json::from_str::<Value>(text) {
            Ok(message) => self.handle(message)?,
            Err(e) => error_response(Value::Null, PARSE_ERROR, format!("parse error: {e}")),
        };
        Some(canonical::to_compact(&response))
    }

    /// Handle one decoded message. Returns `None` for notifications.
    pub fn handle(&self, message: Value) -> Option<Value> {
        let Some(obj) = message.as_object() else {
            return Some(error_response(Value::Null, INVALID_REQUEST, "request must be an object"));
        };
        let id = obj.get("id").cloned();
        let valid_id = matches!(id, None | Some(Value::Number(_)) | Some(Value::String(_)) | Some(Value::Null));
        let method = obj.get("method").and_then(Value::as_str);
        if obj.get("jsonrpc").and_then(Value::as_str) != Some("2.0") || method.is_none() || !valid_id {
            return Some(error_response(id.unwrap_or(Value::Null), INVALID_REQUEST, "invalid JSON-RPC 2.0 request"));
        }
        let id = id?;
        let method = method.expect("checked");
        let params = obj.get("params").cloned().unwrap_or(Value::Null);
        if !(params.is_null() || params.is_object()) {
            return Some(error_response(id, INVALID_PARAMS, "params must be an object"));
        }
        Some(match self.dispatch(method, &params) {
            Ok(result) => json!({"jsonrpc": "2.0", "id": id, "result": result}),
            Err(Failure::Method) => error_response(id, METHOD_NOT_FOUND, format!("method not found: {method}")),
            Err(Failure::Params(msg)) => error_response(id, INVALID_PARAMS, msg),
            Err(Failure::Exec(e)) => exec_error(id, e),
        })
    }

    fn dispatch(&self, method: &str, params: &Value) -> Result<Value, Failure> {
        let session = params.get("session_id").and_then(Value::as_str);
        match method {
            "initialize" => Ok(json!({
                "protocolVersion": PROTOCOL_VERSION,
                "serverInfo": {"name": "cutscene-server", "version": env!("CARGO_PKG_VERSION")},
                "capabilities": {"tools": {}, "prompts": {}},
            })),
            "ping" => Ok(json!({})),
            "tools/list" => {
                let tools: Vec<Value> = self
                    .exec
                    .list_tools(session)?
                    .into_iter()
                    .map(|t| {
                        json!({
                            "name": t.name,
                            "description": t.description,
                            "inputSchema": t.input_schema(),
                            "annotations": {"mutation": t.mutation},
                        })
                    })
                    .collect();
                Ok(json!({"tools": tools}))
            }
            "tools/call" => {
                let name = params
                    .get("name")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Failure::Params("tools/call needs a string 'name'".into()))?;
                let args = params.get("arguments").cloned().unwrap_or(json!({}));
                let result = self.exec.call_tool(session, name, &args)?;
                Ok(json!({
                    "content": [{"type": "text", "text": canonical::to_compact(&result.to_value())}],
                    "structuredContent": result.to_value(),
                    "isError": result.status == Status::Error,
                }))
            }
            "prompts/project_context" => Ok(json!({"context": self.config.project_context})),
            "sessions/open" => {
                let mut spec_value = params.clone();
                if let Some(obj) = spec_value.as_object_mut() {
                    obj.remove("session_id");
                }
                let spec: SessionSpec = if spec_value.is_null() {
                    SessionSpec::default()
                } else {
                    serde_json::from_value(spec_value).map_err(|e| Failure::Params(e.to_string()))?
                };
                Ok(json!({"session_id": self.exec.open_session(spec)?}))
            }
            "sessions/close" => {
                let id = session.ok_or_else(|| Failure::Params("sessions/close needs 'session_id'".into()))?;
                self.exec.close_session(id)?;
                Ok(json!({"closed": id}))
            }
            "trajectory/export" => Ok(json!({"trajectory": self.exec.trajectory(session)?})),
            "sequence/state" => Ok(json!({"state": self.exec.sequence_document(session)?})),
            _ => Err(Failure::Method),
        }
    }
}

enum Failure {
    Method,
    Params(String),
    Exec(ExecError),
}

impl From<ExecError> for Failure {
    fn from(e: ExecError) -> Self {
        Failure::Exec(e)
    }
}
