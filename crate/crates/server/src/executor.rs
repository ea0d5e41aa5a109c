//! The single owner of toolkit state. Every request becomes a job on one
//! queue, executed in arrival order on a dedicated thread, so the recorded
//! trajectory order is the execution order.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{mpsc, Arc};
use std::thread;

use cutscene_core::toolkit::{Status, ToolResult, ToolSchema, Toolkit};
use cutscene_core::trajectory::ToolCallRecord;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;
use tokio::sync::broadcast;

/// Builds a fresh toolkit for an isolated session.
pub type ToolkitFactory = Arc<dyn Fn() -> Toolkit + Send + Sync>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExecError {
    #[error("executor has stopped")]
    Stopped,
    #[error("unknown session '{0}'")]
    UnknownSession(String),
    #[error("isolated sessions are disabled")]
    IsolationDisabled,
    #[error("invalid session request: {0}")]
    InvalidSession(String),
}

/// What to open: a filtered view on the main sequence, or (if enabled) a
/// separate sequence that shares nothing with the main one.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionSpec {
    #[serde(default)]
    pub whitelist: Option<Vec<String>>,
    #[serde(default)]
    pub isolated: bool,
    #[serde(default)]
    pub label: Option<String>,
}

enum Session {
    Scoped {
        whitelist: Option<BTreeSet<String>>,
    },
    Isolated {
        whitelist: Option<BTreeSet<String>>,
        toolkit: Box<Toolkit>,
    },
}

impl Session {
    fn whitelist(&self) -> Option<&BTreeSet<String>> {
        match self {
            Session::Scoped { whitelist } | Session::Isolated { whitelist, .. } => whitelist.as_ref(),
        }
    }
}

struct State {
    main: Toolkit,
    sessions: BTreeMap<String, Session>,
    records: Vec<ToolCallRecord>,
    next_index: u64,
    next_session: u64,
    factory: Option<ToolkitFactory>,
    events: broadcast::Sender<Value>,
}

impl State {
    fn session(&self, id: Option<&str>) -> Result<Option<&Session>, ExecError> {
        match id {
            None => Ok(None),
            Some(id) => self.sessions.get(id).map(Some).ok_or_else(|| ExecError::UnknownSession(id.to_string())),
        }
    }

    fn call(&mut self, session_id: Option<&str>, tool: &str, args: &Value) -> Result<ToolResult, ExecError> {
        let whitelist = self.session(session_id)?.and_then(Session::whitelist).cloned();
        let result = match &whitelist {
            Some(allowed) if !allowed.contains(tool) => ToolResult {
                status: Status::Error,
                data: json!({"error": "tool_not_permitted", "allowed": allowed}),
                message: format!("tool '{tool}' is not available in this session"),
            },
            _ => match session_id.and_then(|id| self.sessions.get_mut(id)) {
                Some(Session::Isolated { toolkit, .. }) => toolkit.call(tool, args),
                _ => self.main.call(tool, args),
            },
        };
        let mut record = ToolCallRecord::new(self.next_index, tool, args, result.status);
        record.session = session_id.map(str::to_string);
        self.next_index += 1;
        let event = json!({
            "jsonrpc": "2.0",
            "method": "notifications/tool_call",
            "params": {"record": record, "result": result},
        });
        self.records.push(record);
        // No subscribers is fine.
        let _ = self.events.send(event);
        Ok(result)
    }

    fn toolkit(&self, session_id: Option<&str>) -> Result<&Toolkit, ExecError> {
        match self.session(session_id)? {
            Some(Session::Isolated { toolkit, .. }) => Ok(toolkit),
            _ => Ok(&self.main),
        }
    }

    /// Records visible from a session: isolated sessions see only their
    /// own calls, the main view and scoped sessions see the shared history.
    fn trajectory(&self, session_id: Option<&str>) -> Result<Vec<ToolCallRecord>, ExecError> {
        let isolated: BTreeSet<&str> = self
            .sessions
            .iter()
            .filter(|(_, s)| matches!(s, Session::Isolated { .. }))
            .map(|(id, _)| id.as_str())
            .collect();
        let wanted = |r: &&ToolCallRecord| match (session_id, r.session.as_deref()) {
            (Some(id), _) if isolated.contains(id) => r.session.as_deref() == Some(id),
            (_, Some(rs)) => !isolated.contains(rs),
            (_, None) => true,
        };
        self.session(session_id)?;
        Ok(self.records.iter().filter(wanted).cloned().collect())
    }

    fn open(&mut self, spec: SessionSpec) -> Result<String, ExecError> {
        let whitelist = match spec.whitelist {
            Some(list) => {
                let known = Toolkit::tool_names();
                if let Some(bad) = list.iter().find(|t| !known.contains(&t.as_str())) {
                    return Err(ExecError::InvalidSession(format!("unknown tool '{bad}' in whitelist")));
                }
                Some(list.into_iter().collect())
            }
            None => None,
        };
        self.next_session += 1;
        let prefix = spec.label.as_deref().map(sanitize_label).unwrap_or_else(|| "session".into());
        let id = format!("{prefix}-{}", self.next_session);
        let session = if spec.isolated {
            let factory = self.factory.as_ref().ok_or(ExecError::IsolationDisabled)?;
            Session::Isolated {
                whitelist,
                toolkit: Box::new(factory()),
            }
        } else {
            Session::Scoped { whitelist }
        };
        self.sessions.insert(id.clone(), session);
        Ok(id)
    }
}

fn sanitize_label(label: &str) -> String {
    let s: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect();
    if s.is_empty() {
        "session".into()
    } else {
        s
    }
}

type Job = Box<dyn FnOnce(&mut State) + Send>;

/// Cheap, cloneable handle onto the executor thread.
#[derive(Clone)]
pub struct ExecutorHandle {
    jobs: mpsc::Sender<Job>,
    events: broadcast::Sender<Value>,
}

impl std::fmt::Debug for ExecutorHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExecutorHandle").finish_non_exhaustive()
    }
}

/// Start the executor thread. `factory` enables isolated sessions.
pub fn spawn(toolkit: Toolkit, factory: Option<ToolkitFactory>) -> ExecutorHandle {
    let (jobs, rx) = mpsc::channel::<Job>();
    let (events, _) = broadcast::channel(1024);
    let mut state = State {
        main: toolkit,
        sessions: BTreeMap::new(),
        records: Vec::new(),
        next_index: 0,
        next_session: 0,
        factory,
        events: events.clone(),
    };
    thread::Builder::new()
        .name("toolkit-executor".into())
        .spawn(move || {
            while let Ok(job) = rx.recv() {
                job(&mut state);
            }
        })
        .expect("spawn executor thread");
    ExecutorHandle { jobs, events }
}

impl ExecutorHandle {
    fn run<R: Send + 'static>(&self, f: impl FnOnce(&mut State) -> R + Send + 'static) -> Result<R, ExecError> {
        let (tx, rx) = mpsc::channel();
        let job: Job = Box::new(move |state| {
            let _ = tx.send(f(state));
        });
        self.jobs.send(job).map_err(|_| ExecError::Stopped)?;
        rx.recv().map_err(|_| ExecError::Stopped)
    }

    /// Execute one tool call and record it.
    pub fn call_tool(&self, session: Option<&str>, tool: &str, args: &Value) -> Result<ToolResult, ExecError> {
        let (session, tool, args) = (session.map(str::to_string), tool.to_string(), args.clone());
        self.run(move |s| s.call(session.as_deref(), &tool, &args))?
    }

    /// Schemas visible from a session, in catalog order.
    pub fn list_tools(&self, session: Option<&str>) -> Result<Vec<&'static ToolSchema>, ExecError> {
        let session = session.map(str::to_string);
        self.run(move |s| {
            let whitelist = s.session(session.as_deref())?.and_then(Session::whitelist).cloned();
            Ok(Toolkit::schemas()
                .iter()
                .filter(|t| whitelist.as_ref().is_none_or(|w| w.contains(t.name)))
                .collect())
        })?
    }

    pub fn open_session(&self, spec: SessionSpec) -> Result<String, ExecError> {
        self.run(move |s| s.open(spec))?
    }

    pub fn close_session(&self, id: &str) -> Result<(), ExecError> {
        let id = id.to_string();
        self.run(move |s| s.sessions.remove(&id).map(|_| ()).ok_or(ExecError::UnknownSession(id)))?
    }

    pub fn trajectory(&self, session: Option<&str>) -> Result<Vec<ToolCallRecord>, ExecError> {
        let session = session.map(str::to_string);
        self.run(move |s| s.trajectory(session.as_deref()))?
    }

    /// Sequence document as seen from a session.
    pub fn sequence_document(&self, session: Option<&str>) -> Result<Value, ExecError> {
        let session = session.map(str::to_string);
        self.run(move |s| s.toolkit(session.as_deref()).map(|t| t.sequence().to_document()))?
    }

    /// Run a read-only closure against a session's toolkit.
    pub fn inspect<R: Send + 'static>(
        &self,
        session: Option<&str>,
        f: impl FnOnce(&Toolkit) -> R + Send + 'static,
    ) -> Result<R, ExecError> {
        let session = session.map(str::to_string);
        self.run(move |s| s.toolkit(session.as_deref()).map(f))?
    }

    /// Tool-call notifications, one per executed call.
    pub fn subscribe(&self) -> broadcast::Receiver<Value> {
        self.events.subscribe()
    }

    pub(crate) fn publish(&self, message: Value) {
        let _ = self.events.send(message);
    }
}
