//! WebSocket transport for [`LiveSession`](crate::session::LiveSession) and
//! static assets for the browser client.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response;
use axum::routing::get;
use axum::Router;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

use crate::session::Service;

/// `GET /ws` upgrades to a session; everything else is served from
/// `assets` when given.
pub fn router(service: Arc<Service>, assets: Option<PathBuf>) -> Router {
    let router = Router::new()
        .route("/ws", get(upgrade))
        .route("/healthz", get(|| async { "ok" }))
        .with_state(service);
    match assets {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router,
    }
}

async fn upgrade(ws: WebSocketUpgrade, State(service): State<Arc<Service>>) -> Response {
    ws.on_upgrade(move |socket| run_session(socket, service))
}

async fn run_session(mut socket: WebSocket, service: Arc<Service>) {
    let mut session = service.session();
    tracing::debug!("session opened");
    while let Some(msg) = socket.recv().await {
        let text = match msg {
            Ok(Message::Text(text)) => text,
            Ok(Message::Close(_)) | Err(_) => break,
            Ok(_) => continue,
        };
        for frame in session.handle_text(text.as_str()) {
            if socket.send(Message::Text(frame.to_json().into())).await.is_err() {
                return;
            }
        }
    }
    tracing::debug!("session closed");
}

/// Serves until the process is interrupted.
pub async fn serve(listener: TcpListener, service: Arc<Service>, assets: Option<PathBuf>) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(service, assets))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
