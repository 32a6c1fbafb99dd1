//! On-disk content-addressed cache.
//!
//! Each entry is `<dir>/<key[..2]>/<key>.json` holding the key, a SHA-256 digest
//! of the payload and the payload. Entries whose key or digest do not match are
//! ignored and later overwritten. Writes go to a temporary file in the target
//! directory which is then renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cache::ResolutionStore;

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

fn digest(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        let shard = key.get(..2).unwrap_or("00");
        self.dir.join(shard).join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Value> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        let entry: Value = serde_json::from_str(&text).ok()?;
        if entry.get("key").and_then(Value::as_str) != Some(key) {
            return None;
        }
        let payload = entry.get("payload")?;
        if entry.get("digest").and_then(Value::as_str) != Some(digest(&payload.to_string()).as_str()) {
            return None;
        }
        Some(payload.clone())
    }

    /// Best effort: a failed write only costs a recomputation later.
    pub fn put(&self, key: &str, payload: &Value) {
        let _ = self.try_put(key, payload);
    }

    fn try_put(&self, key: &str, payload: &Value) -> std::io::Result<()> {
        let path = self.path(key);
        let parent = path.parent().unwrap_or(&self.dir);
        std::fs::create_dir_all(parent)?;
        let entry = json!({"key": key, "digest": digest(&payload.to_string()), "payload": payload});
        let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
        tmp.write_all(entry.to_string().as_bytes())?;
        tmp.flush()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }
}

impl ResolutionStore for DiskCache {
    fn load(&self, key: &str) -> Option<Value> {
        self.get(key)
    }

    fn save(&self, key: &str, value: &Value) {
        self.put(key, value)
    }
}
