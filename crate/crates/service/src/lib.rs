//! Read-only JSON API over a directory of `.tst.jsonl` traces.
//!
//! - `GET /api/runs`
//! - `GET /api/runs/{id}/steps?from=&to=&arms=`
//! - `GET /api/runs/{id}/snapshot/{t}?rho=`
//! - `GET /api/runs/{id}/hdr?arm=&rho=&from=&to=`
//! - `GET /api/runs/{id}/barcode?arms=&from=&to=`

mod error;
mod routes;
mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::http::{HeaderValue, Method};
use axum::Router;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use error::ApiError;
pub use routes::StepsPage;
pub use store::TraceStore;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub trace_dir: PathBuf,
    pub addr: SocketAddr,
    /// `None` allows any origin.
    pub allow_origin: Option<String>,
}

/// Builds the API router over `store`.
pub fn router(store: Arc<TraceStore>, allow_origin: Option<&str>) -> Result<Router, ApiError> {
    let origin = match allow_origin {
        None | Some("*") => AllowOrigin::any(),
        Some(o) => AllowOrigin::exact(
            HeaderValue::from_str(o).map_err(|_| ApiError::BadRequest(format!("invalid origin {o:?}")))?,
        ),
    };
    let cors = CorsLayer::new().allow_origin(origin).allow_methods([Method::GET]);
    Ok(routes::api_routes().with_state(store).layer(cors))
}

/// Serves the API until the process is stopped.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let store = Arc::new(TraceStore::new(&config.trace_dir));
    let app = router(store, config.allow_origin.as_deref())
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e.to_string()))?;
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    tracing::info!(addr = %listener.local_addr()?, dir = %config.trace_dir.display(), "serving traces");
    axum::serve(listener, app).await
}
