//! Content-addressed report cache on disk.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Cached output of one run: the text report and its JSON form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub text: String,
    pub json: String,
}

pub struct Cache {
    dir: PathBuf,
}

/// Hex SHA-256 over everything that influences a report.
pub fn cache_key(canonical: &str, command: &str, truncation: Option<u64>) -> String {
    let mut h = Sha256::new();
    for part in [env!("CARGO_PKG_VERSION"), command, &truncation.map_or_else(|| "-".into(), |t| t.to_string()), canonical] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    hex::encode(h.finalize())
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// `Ok(None)` on a miss; `Err(CacheCorrupt)` when an entry exists but is unreadable.
    pub fn lookup(&self, key: &str) -> Result<Option<Entry>> {
        let path = self.path(key);
        let raw = match fs::read_to_string(&path) {
            Ok(s) => s,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::CacheCorrupt(format!("{}: {e}", path.display()))),
        };
        let corrupt = |why: &str| Error::CacheCorrupt(format!("{}: {why}", path.display()));
        let v: serde_json::Value = serde_json::from_str(&raw).map_err(|e| corrupt(&e.to_string()))?;
        if v["key"].as_str() != Some(key) {
            return Err(corrupt("key does not match file name"));
        }
        match (v["text"].as_str(), v["json"].as_str()) {
            (Some(t), Some(j)) => Ok(Some(Entry { text: t.to_string(), json: j.to_string() })),
            _ => Err(corrupt("missing fields")),
        }
    }

    /// Write to a temporary file in the cache directory, then rename into place.
    pub fn store(&self, key: &str, entry: &Entry) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let body = serde_json::to_string(&json!({ "key": key, "text": entry.text, "json": entry.json }))
            .expect("JSON values serialize");
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }
}
