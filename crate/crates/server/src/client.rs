//! Blocking HTTP client for the `/rpc` endpoint.

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("rpc error {code}: {message}")]
    Rpc { code: i64, message: String },
    #[error("malformed response: {0}")]
    Malformed(String),
}

#[derive(Debug)]
pub struct HttpClient {
    url: String,
    agent: ureq::Agent,
    next_id: u64,
}

impl HttpClient {
    /// `base` is e.g. `http://127.0.0.1:8765`.
    pub fn new(base: &str) -> Self {
        Self {
            url: format!("{}/rpc", base.trim_end_matches('/')),
            agent: ureq::Agent::new_with_defaults(),
            next_id: 1,
        }
    }

    /// Send raw text and return the raw response body.
    pub fn send_text(&self, body: &str) -> Result<String, ClientError> {
        let response = self
            .agent
            .post(&self.url)
            .header("content-type", "application/json")
            .send(body)
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        response.into_body().read_to_string().map_err(|e| ClientError::Transport(e.to_string()))
    }

    /// Call a method and return its `result`.
    pub fn request(&mut self, method: &str, params: Value) -> Result<Value, ClientError> {
        let id = self.next_id;
        self.next_id += 1;
        let body = json!({"jsonrpc": "2.0", "id": id, "method": method, "params": params});
        let text = self.send_text(&body.to_string())?;
        let response: Value = serde_json::from_str(&text).map_err(|e| ClientError::Malformed(e.to_string()))?;
        if let Some(err) = response.get("error") {
            return Err(ClientError::Rpc {
                code: err.get("code").and_then(Value::as_i64).unwrap_or(0),
                message: err.get("message").and_then(Value::as_str).unwrap_or_default().to_string(),
            });
        }
        response.get("result").cloned().ok_or_else(|| ClientError::Malformed("missing result".into()))
    }
}
