//! Publishes annotations as dereferenceable resources.
//!
//! Endpoints:
//!
//! * `POST /annotations` ingests an `application/n-triples` document;
//! * `GET /annotations/{id}` returns one annotation as N-Triples or Turtle;
//! * `GET /search?target=URI[&selector=FRAGMENT]` finds annotations on a
//!   resource, optionally restricted to an overlapping segment;
//! * `GET /timegate/{original}` redirects to the archived snapshot nearest
//!   the `Accept-Datetime` request header.

mod config;
mod http;
mod store;

use std::future::Future;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use oac_core::rdf::{parse_ntriples, serialize_ntriples_canonical, Iri};
use oac_core::temporal::ArchiveIndex;
use thiserror::Error;

pub use config::Config;
pub use http::{negotiate, router, Format};
pub use store::{AnnotationStore, IngestOutcome, Rejection, SEARCH_CAP};

#[derive(Debug, Error)]
pub enum ServerError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Load { path: PathBuf, message: String },
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: std::net::SocketAddr,
        source: std::io::Error,
    },
    #[error("server: {0}")]
    Io(#[from] std::io::Error),
}

/// Shared state behind every handler.
pub struct AppState {
    pub store: RwLock<AnnotationStore>,
    pub archive: Option<ArchiveIndex>,
    pub base: Iri,
}

impl AppState {
    pub fn new(base: Iri, archive: Option<ArchiveIndex>) -> Self {
        AppState {
            store: RwLock::new(AnnotationStore::default()),
            archive,
            base,
        }
    }

    /// State for `config`, with the archive index and any snapshot loaded.
    pub fn from_config(config: &Config) -> Result<Self, ServerError> {
        let archive = match &config.archive_index {
            Some(path) => {
                let text = read(path)?;
                Some(ArchiveIndex::from_json(&text).map_err(|e| ServerError::Load {
                    path: path.clone(),
                    message: e.to_string(),
                })?)
            }
            None => None,
        };
        let state = AppState::new(config.base_uri.clone(), archive);
        if let Some(path) = config.store_snapshot.as_ref().filter(|p| p.exists()) {
            let g = parse_ntriples(&read(path)?).map_err(|e| ServerError::Load {
                path: path.clone(),
                message: e.to_string(),
            })?;
            let outcome = state.store.write().expect("store lock").ingest(&g, &state.base);
            tracing::info!(
                stored = outcome.stored.len(),
                rejected = outcome.rejected.len(),
                "restored snapshot {}",
                path.display()
            );
        }
        Ok(state)
    }

    /// Write every stored annotation to `path` as canonical N-Triples.
    pub fn save_snapshot(&self, path: &std::path::Path) -> Result<(), ServerError> {
        let graph = self.store.read().expect("store lock").to_graph();
        let text = serialize_ntriples_canonical(&graph).map_err(|e| ServerError::Load {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        std::fs::write(path, text)?;
        Ok(())
    }
}

fn read(path: &std::path::Path) -> Result<String, ServerError> {
    std::fs::read_to_string(path).map_err(|e| ServerError::Load {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Serve until `shutdown` resolves, then write the store snapshot if one is
/// configured.
pub async fn run(
    config: Config,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServerError> {
    let state = Arc::new(AppState::from_config(&config)?);
    let listener = tokio::net::TcpListener::bind(config.listen)
        .await
        .map_err(|source| ServerError::Bind {
            addr: config.listen,
            source,
        })?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(shutdown)
        .await?;
    if let Some(path) = &config.store_snapshot {
        state.save_snapshot(path)?;
        tracing::info!("wrote snapshot {}", path.display());
    }
    Ok(())
}

/// [`run`] until Ctrl-C.
pub async fn serve(config: Config) -> Result<(), ServerError> {
    run(config, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}
