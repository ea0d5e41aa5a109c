//! HTTP transport: `POST /rpc` answers requests, `GET /events` streams
//! every response and tool-call notification as server-sent events.

use std::convert::Infallible;
use std::net::SocketAddr;

use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use futures::Stream;
use tokio::net::TcpListener;
use tokio::sync::broadcast;

use crate::rpc::RpcHandler;

pub fn router(handler: RpcHandler) -> Router {
    Router::new()
        .route("/rpc", post(rpc))
        .route("/events", get(events))
        .with_state(handler)
}

async fn rpc(State(handler): State<RpcHandler>, body: String) -> Response {
    let worker = handler.clone();
    let outcome = tokio::task::spawn_blocking(move || worker.handle_text(&body)).await;
    match outcome {
        Ok(Some(text)) => {
            if let Ok(value) = serde_json::from_str(&text) {
                handler.executor().publish(value);
            }
            ([(header::CONTENT_TYPE, "application/json")], text).into_response()
        }
        Ok(None) => StatusCode::ACCEPTED.into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

async fn events(State(handler): State<RpcHandler>) -> Sse<impl Stream<Item = Result<Event, Infallible>>> {
    let rx = handler.executor().subscribe();
    let stream = futures::stream::unfold(rx, |mut rx| async move {
        loop {
            match rx.recv().await {
                Ok(message) => {
                    let text = cutscene_core::canonical::to_compact(&message);
                    return Some((Ok(Event::default().data(text)), rx));
                }
                Err(broadcast::error::RecvError::Lagged(_)) => continue,
                Err(broadcast::error::RecvError::Closed) => return None,
            }
        }
    });
    Sse::new(stream).keep_alive(KeepAlive::default())
}

/// Bind and serve until the future is dropped. Returns the bound address
/// through `on_bound` so callers can use port 0.
pub async fn serve(
    handler: RpcHandler,
    addr: SocketAddr,
    on_bound: impl FnOnce(SocketAddr),
) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    on_bound(listener.local_addr()?);
    axum::serve(listener, router(handler)).await
}
