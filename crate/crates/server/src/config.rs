use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use oac_core::rdf::Iri;
use serde::Deserialize;

use crate::ServerError;

/// JSON configuration file.
///
/// ```json
/// {
///   "listen": "127.0.0.1:8080",
///   "base_uri": "http://localhost:8080/",
///   "archive_index": "archive.json",
///   "store_snapshot": "store.nt"
/// }
/// ```
///
/// Relative paths resolve against the config file's directory.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub listen: SocketAddr,
    pub base_uri: Iri,
    #[serde(default)]
    pub archive_index: Option<PathBuf>,
    #[serde(default)]
    pub store_snapshot: Option<PathBuf>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, ServerError> {
        let mut config: Config =
            serde_json::from_str(text).map_err(|e| ServerError::Config(e.to_string()))?;
        if !config.base_uri.is_http() {
            return Err(ServerError::Config(format!(
                "base_uri must be http(s), got {}",
                config.base_uri
            )));
        }
        if !config.base_uri.as_str().ends_with('/') {
            config.base_uri = Iri::new(format!("{}/", config.base_uri)).expect("scheme kept");
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ServerError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ServerError::Config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_json(&text)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        for p in [&mut config.archive_index, &mut config.store_snapshot]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        Ok(config)
    }
}
