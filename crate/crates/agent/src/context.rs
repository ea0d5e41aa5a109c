//! Conversation state: the task preamble, compressed tool history and the
//! single live sequence-state block.

use std::collections::HashSet;

use cutscene_core::canonical;
use cutscene_core::toolkit::{Status, Toolkit};
use cutscene_core::trajectory::ToolCallRecord;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const STATE_TAG: &str = "current_cutscene_content";
pub const SUMMARY_TAG: &str = "compressed_tool_calls";
pub const DEFAULT_KEEP_RECENT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

impl Message {
    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detail {
    Full,
    Summarized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub record: ToolCallRecord,
    pub mutation: bool,
    pub detail: Detail,
    /// The result envelope; dropped once summarized.
    pub result: Value,
}

impl HistoryEntry {
    /// Mutation flag comes from the tool registry; anything unregistered
    /// (e.g. a local delegation tool) counts as a mutation.
    pub fn new(record: ToolCallRecord, result: Value) -> Self {
        let mutation = Toolkit::schema(&record.tool).map(|s| s.mutation).unwrap_or(true);
        Self {
            record,
            mutation,
            detail: Detail::Full,
            result,
        }
    }

    fn summarized(&self) -> Self {
        let mut record = self.record.clone();
        record.args = json!({});
        Self {
            record,
            mutation: self.mutation,
            detail: Detail::Summarized,
            result: Value::Null,
        }
    }
}

/// Keep the last `keep_recent` entries and the latest call of every query
/// tool in full; everything else keeps only its tool name. Order is kept.
pub fn compress_history(entries: &[HistoryEntry], keep_recent: usize) -> Vec<HistoryEntry> {
    let recent_from = entries.len().saturating_sub(keep_recent);
    let mut latest_query: HashSet<usize> = HashSet::new();
    let mut seen: HashSet<&str> = HashSet::new();
    for (i, e) in entries.iter().enumerate().rev() {
        if !e.mutation && seen.insert(e.record.tool.as_str()) {
            latest_query.insert(i);
        }
    }
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if e.detail == Detail::Full && (i >= recent_from || latest_query.contains(&i)) {
                e.clone()
            } else {
                e.summarized()
            }
        })
        .collect()
}

/// Render history as text. Summarized entries collapse into one block at
/// the position of the first of them.
pub fn render_history(entries: &[HistoryEntry]) -> String {
    let summarized: Vec<&str> = entries
        .iter()
        .filter(|e| e.detail == Detail::Summarized)
        .map(|e| e.record.tool.as_str())
        .collect();
    let mut out = Vec::new();
    let mut summary_written = false;
    for e in entries {
        match e.detail {
            Detail::Summarized if !summary_written => {
                summary_written = true;
                let calls: String = summarized.iter().map(|t| format!("  <call>{t}</call>\n")).collect();
                out.push(format!(
                    "<{SUMMARY_TAG} count=\"{}\">\n{calls}</{SUMMARY_TAG}>",
                    summarized.len()
                ));
            }
            Detail::Summarized => {}
            Detail::Full => {
                let status = match e.record.status {
                    Status::Ok => "ok",
                    Status::Error => "error",
                };
                out.push(format!(
                    "<tool_call index=\"{}\" tool=\"{}\" status=\"{status}\">\nargs: {}\nresult: {}\n</tool_call>",
                    e.record.index,
                    e.record.tool,
                    canonical::to_compact(&e.record.args),
                    canonical::to_compact(&e.result)
                ));
            }
        }
    }
    out.join("\n")
}

/// The exact text of a state block for `doc`.
pub fn state_block(doc: &Value) -> String {
    format!(
        "<{STATE_TAG}>\nContents in current cutscene:\n{}</{STATE_TAG}>",
        canonical::to_pretty(doc)
    )
}

/// One agent's conversation. The state block is a single slot, so
/// injecting again replaces it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Conversation {
    pub preamble: Vec<Message>,
    pub history: Vec<HistoryEntry>,
    state: Option<String>,
}

impl Conversation {
    pub fn new(task: impl Into<String>) -> Self {
        Self {
            preamble: vec![Message::user(task)],
            ..Self::default()
        }
    }

    pub fn state(&self) -> Option<&str> {
        self.state.as_deref()
    }

    /// Append a call; entries are numbered by position in this history.
    pub fn push_call(&mut self, mut entry: HistoryEntry) {
        entry.record.index = self.history.len() as u64;
        self.history.push(entry);
    }

    pub fn compress(&mut self, keep_recent: usize) {
        self.history = compress_history(&self.history, keep_recent);
    }

    /// Messages as sent to a model: preamble, history, then the state
    /// block last.
    pub fn messages(&self) -> Vec<Message> {
        let mut out = self.preamble.clone();
        if !self.history.is_empty() {
            out.push(Message::user(format!("<tool_history>\n{}\n</tool_history>", render_history(&self.history))));
        }
        if let Some(state) = &self.state {
            out.push(Message::user(state.clone()));
        }
        out
    }
}

pub fn inject_state(conversation: &mut Conversation, doc: &Value) {
    conversation.state = Some(state_block(doc));
}
