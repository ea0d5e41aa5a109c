//! Tool server: a serialized executor that owns the toolkit, JSON-RPC
//! dispatch, and stdio and HTTP/SSE transports.

pub mod client;
pub mod executor;
pub mod http;
pub mod rpc;
pub mod stdio;

pub use executor::{spawn, ExecError, ExecutorHandle, SessionSpec, ToolkitFactory};
pub use rpc::{RpcHandler, ServerConfig};
