//! Optional content-addressed store for resolutions.
//!
//! Nothing is cached until a store is installed. Keys are SHA-256 digests of
//! the canonical JSON of everything the result depends on. Restored values go
//! through the same `from_json` verification as any other input, so a stale or
//! corrupted entry is recomputed rather than trusted.

use std::sync::{Arc, RwLock};

use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub trait ResolutionStore: Send + Sync {
    fn load(&self, key: &str) -> Option<Value>;
    fn save(&self, key: &str, value: &Value);
}

static STORE: RwLock<Option<Arc<dyn ResolutionStore>>> = RwLock::new(None);

/// Installs (or with `None`, removes) the process-wide store.
pub fn install(store: Option<Arc<dyn ResolutionStore>>) {
    *STORE.write().unwrap_or_else(|e| e.into_inner()) = store;
}

fn current() -> Option<Arc<dyn ResolutionStore>> {
    STORE.read().unwrap_or_else(|e| e.into_inner()).clone()
}

/// Hex SHA-256 of `kind` and the canonical serialization of `parts`.
pub fn content_key(kind: &str, parts: &[&Value]) -> String {
    let mut h = Sha256::new();
    h.update(kind.as_bytes());
    for p in parts {
        h.update([0u8]);
        // serde_json maps are ordered, so this is canonical
        h.update(p.to_string().as_bytes());
    }
    hex::encode(h.finalize())
}

pub(crate) fn memo<T>(
    kind: &str,
    parts: impl FnOnce() -> Vec<Value>,
    compute: impl FnOnce() -> Result<T>,
    save: impl Fn(&T) -> Value,
    restore: impl Fn(&Value) -> Result<T>,
) -> Result<T> {
    let Some(store) = current() else {
        return compute();
    };
    let parts = parts();
    let key = content_key(kind, &parts.iter().collect::<Vec<_>>());
    if let Some(v) = store.load(&key) {
        if let Ok(t) = restore(&v) {
            return Ok(t);
        }
    }
    let t = compute()?;
    store.save(&key, &save(&t));
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_separate_kinds_and_parts() {
        let a = json!({"x": 1});
        let b = json!({"x": 2});
        assert_ne!(content_key("r", &[&a]), content_key("r", &[&b]));
        assert_ne!(content_key("r", &[&a]), content_key("s", &[&a]));
        assert_eq!(content_key("r", &[&a, &b]), content_key("r", &[&a, &b]));
        assert_eq!(content_key("r", &[&a]).len(), 64);
    }
}
