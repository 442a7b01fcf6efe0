//! On-disk cache of expensive results, keyed by a content hash of the inputs.
//!
//! Entries that fail to parse are deleted and reported as
//! [`Error::CacheCorrupt`]; the caller decides whether to recompute.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::output::{read_levels_csv, write_levels_csv};
use crate::spectrum::EigenLevel;

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

/// Hex SHA-256 of the key parts, separated so that `["ab", "c"]` and
/// `["a", "bc"]` differ.
pub fn cache_key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, kind: &str, key: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{kind}-{key}.{ext}"))
    }

    fn corrupt(path: PathBuf, reason: String) -> Error {
        if let Err(e) = fs::remove_file(&path) {
            log::warn!("could not remove corrupt cache entry {}: {e}", path.display());
        }
        Error::CacheCorrupt { path, reason }
    }

    fn write_atomic(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load_json<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Result<Option<T>> {
        let path = self.path(kind, key, "json");
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        match serde_json::from_slice(&bytes) {
            Ok(v) => {
                log::debug!("cache hit {}", path.display());
                Ok(Some(v))
            }
            Err(e) => Err(Self::corrupt(path, e.to_string())),
        }
    }

    pub fn store_json<T: Serialize>(&self, kind: &str, key: &str, value: &T) -> Result<()> {
        let path = self.path(kind, key, "json");
        let text = serde_json::to_vec(value).map_err(|e| Error::Config(e.to_string()))?;
        self.write_atomic(&path, &text)
    }

    pub fn load_levels(&self, key: &str) -> Result<Option<Vec<EigenLevel>>> {
        let path = self.path("levels", key, "csv");
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        match read_levels_csv(&bytes[..]) {
            Ok(levels) => Ok(Some(levels)),
            Err(e) => Err(Self::corrupt(path, e.to_string())),
        }
    }

    pub fn store_levels(&self, key: &str, levels: &[EigenLevel]) -> Result<()> {
        let path = self.path("levels", key, "csv");
        let mut buf = Vec::new();
        write_levels_csv(&mut buf, levels)?;
        self.write_atomic(&path, &buf)
    }
}
