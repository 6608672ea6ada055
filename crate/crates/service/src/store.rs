//! Bundle files on disk, one `<fragment_id>.bundle.json` per fragment.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use labov_core::format::{parse_bundle, serialize_bundle, version_token, Bundle};

use crate::error::ApiError;

pub const SUFFIX: &str = ".bundle.json";

#[derive(Debug, Clone)]
pub struct Stored {
    pub bundle: Bundle,
    pub version: String,
}

#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
    locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

/// Fragment ids double as file names, so they are kept to a safe alphabet.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id.starts_with('.')
        && id.len() <= 200
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

impl Store {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Store { dir, locks: Mutex::new(HashMap::new()) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, id: &str) -> Result<PathBuf, ApiError> {
        if !valid_id(id) {
            return Err(ApiError::NotFound(format!("no fragment {id:?}")));
        }
        Ok(self.dir.join(format!("{id}{SUFFIX}")))
    }

    /// Writers to one fragment take this lock around read, check and replace.
    pub fn lock(&self, id: &str) -> Arc<tokio::sync::Mutex<()>> {
        let mut locks = self.locks.lock().expect("lock table poisoned");
        locks.entry(id.to_string()).or_default().clone()
    }

    pub async fn load(&self, id: &str) -> Result<Stored, ApiError> {
        let path = self.path(id)?;
        let bytes = match tokio::fs::read(&path).await {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(ApiError::NotFound(format!("no fragment {id:?}")))
            }
            Err(e) => return Err(e.into()),
        };
        let bundle = parse_bundle(&bytes).map_err(|e| ApiError::Internal(format!("{}: {e}", path.display())))?;
        if bundle.fragment_id != id {
            return Err(ApiError::Internal(format!("{} holds fragment {:?}", path.display(), bundle.fragment_id)));
        }
        Ok(Stored { bundle, version: version_token(&bytes) })
    }

    /// Every stored fragment, ordered by id.
    pub async fn list(&self) -> Result<Vec<Stored>, ApiError> {
        let mut ids = Vec::new();
        let mut entries = tokio::fs::read_dir(&self.dir).await?;
        while let Some(e) = entries.next_entry().await? {
            let name = e.file_name();
            if let Some(id) = name.to_str().and_then(|n| n.strip_suffix(SUFFIX)) {
                if valid_id(id) {
                    ids.push(id.to_string());
                }
            }
        }
        ids.sort();
        let mut out = Vec::with_capacity(ids.len());
        for id in ids {
            out.push(self.load(&id).await?);
        }
        Ok(out)
    }

    /// Replaces the file atomically and returns the new version token.
    pub async fn save(&self, bundle: &Bundle) -> Result<String, ApiError> {
        let path = self.path(&bundle.fragment_id)?;
        let bytes = serialize_bundle(bundle).map_err(ApiError::bad_request)?;
        let version = version_token(&bytes);
        let dir = self.dir.clone();
        tokio::task::spawn_blocking(move || -> std::io::Result<()> {
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(&bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(&path).map_err(|e| e.error)?;
            Ok(())
        })
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;
        Ok(version)
    }
}
