//! How the harness reaches the tool server: in-process or over HTTP, both
//! speaking the same JSON-RPC methods.

use cutscene_core::toolkit::ToolResult;
use cutscene_core::trajectory::ToolCallRecord;
use cutscene_server::client::{ClientError, HttpClient};
use cutscene_server::RpcHandler;
use serde_json::{json, Value};

use crate::AgentError;

pub trait McpTransport {
    /// Call `method` and return its `result` member.
    fn request(&mut self, method: &str, params: Value) -> Result<Value, AgentError>;
}

impl McpTransport for RpcHandler {
    fn request(&mut self, method: &str, params: Value) -> Result<Value, AgentError> {
        let message = json!({"jsonrpc": "2.0", "id": 0, "method": method, "params": params});
        let response = self
            .handle(message)
            .ok_or_else(|| AgentError::Transport("no response to a request".into()))?;
        unwrap_response(response)
    }
}

impl McpTransport for HttpClient {
    fn request(&mut self, method: &str, params: Value) -> Result<Value, AgentError> {
        HttpClient::request(self, method, params).map_err(|e| match e {
            ClientError::Rpc { code, message } => AgentError::Rpc { code, message },
            other => AgentError::Transport(other.to_string()),
        })
    }
}

fn unwrap_response(response: Value) -> Result<Value, AgentError> {
    if let Some(err) = response.get("error") {
        return Err(AgentError::Rpc {
            code: err.get("code").and_then(Value::as_i64).unwrap_or(0),
            message: err.get("message").and_then(Value::as_str).unwrap_or_default().to_string(),
        });
    }
    response
        .get("result")
        .cloned()
        .ok_or_else(|| AgentError::Transport("response without result".into()))
}

fn malformed(what: &str) -> AgentError {
    AgentError::Transport(format!("malformed {what} response"))
}

fn with_session(mut params: Value, session: Option<&str>) -> Value {
    if let (Some(id), Some(obj)) = (session, params.as_object_mut()) {
        obj.insert("session_id".into(), json!(id));
    }
    params
}

/// Typed wrappers over the raw methods.
pub struct Mcp<'a> {
    inner: &'a mut dyn McpTransport,
}

impl<'a> Mcp<'a> {
    pub fn new(inner: &'a mut dyn McpTransport) -> Self {
        Self { inner }
    }

    pub fn call_tool(&mut self, session: Option<&str>, tool: &str, args: &Value) -> Result<ToolResult, AgentError> {
        let result = self
            .inner
            .request("tools/call", with_session(json!({"name": tool, "arguments": args}), session))?;
        let envelope = result.get("structuredContent").cloned().ok_or_else(|| malformed("tools/call"))?;
        serde_json::from_value(envelope).map_err(|_| malformed("tools/call"))
    }

    /// Tool descriptors as listed for the session.
    pub fn list_tools(&mut self, session: Option<&str>) -> Result<Vec<Value>, AgentError> {
        let result = self.inner.request("tools/list", with_session(json!({}), session))?;
        match result.get("tools") {
            Some(Value::Array(tools)) => Ok(tools.clone()),
            _ => Err(malformed("tools/list")),
        }
    }

    pub fn sequence_state(&mut self, session: Option<&str>) -> Result<Value, AgentError> {
        let result = self.inner.request("sequence/state", with_session(json!({}), session))?;
        result.get("state").cloned().ok_or_else(|| malformed("sequence/state"))
    }

    pub fn project_context(&mut self) -> Result<String, AgentError> {
        let result = self.inner.request("prompts/project_context", json!({}))?;
        Ok(result.get("context").and_then(Value::as_str).unwrap_or_default().to_string())
    }

    pub fn open_session(&mut self, whitelist: Option<&[String]>, label: &str) -> Result<String, AgentError> {
        let mut params = json!({"label": label});
        if let Some(list) = whitelist {
            params["whitelist"] = json!(list);
        }
        let result = self.inner.request("sessions/open", params)?;
        result
            .get("session_id")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| malformed("sessions/open"))
    }

    pub fn close_session(&mut self, session: &str) -> Result<(), AgentError> {
        self.inner.request("sessions/close", json!({"session_id": session}))?;
        Ok(())
    }

    pub fn trajectory(&mut self, session: Option<&str>) -> Result<Vec<ToolCallRecord>, AgentError> {
        let result = self.inner.request("trajectory/export", with_session(json!({}), session))?;
        let list = result.get("trajectory").cloned().ok_or_else(|| malformed("trajectory/export"))?;
        serde_json::from_value(list).map_err(|_| malformed("trajectory/export"))
    }
}
