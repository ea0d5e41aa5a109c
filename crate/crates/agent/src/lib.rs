//! Agent side: prompt assembly, conversation state and history
//! compression, model backends, and the director/subagent loop.

pub mod backend;
pub mod context;
pub mod harness;
pub mod prompt;
pub mod templates;
pub mod transport;

use thiserror::Error;

pub use backend::{LiveBackend, LiveConfig, ModelBackend, ModelRequest, ScriptStep, ScriptedBackend, ToolIntent, Turn};
pub use context::{compress_history, inject_state, Conversation, HistoryEntry};
pub use harness::{DirectorOutcome, Harness, HarnessConfig, RunStatus, SubAgentRequest, SubAgentResult, SubAgentRun};
pub use prompt::{token_count, ApproxTokenizer, PromptElement, PromptManager, Tokenizer};
pub use transport::{Mcp, McpTransport};

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("rpc error {code}: {message}")]
    Rpc { code: i64, message: String },
    #[error("model backend error: {0}")]
    Backend(String),
    #[error("script error: {0}")]
    Script(String),
    #[error("unknown subagent template '{0}'")]
    UnknownTemplate(String),
    #[error("invalid subagent template: {0}")]
    InvalidTemplate(String),
}
