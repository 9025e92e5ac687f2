//! On-disk cache of Betti sequences, one JSON file per resolution.
//!
//! The file name is the hex SHA-256 of a descriptor naming the engine, the
//! ring, the module presentation and the caps. Writes go through a temporary
//! file in the same directory and an atomic rename.

use crate::PoincareSeries;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "QCI_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub descriptor: String,
    pub betti: PoincareSeries,
    pub cap_sensitive: bool,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    /// The directory from [`CACHE_DIR_ENV`], if set.
    pub fn from_env() -> Option<std::io::Result<Self>> {
        std::env::var_os(CACHE_DIR_ENV).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(descriptor: &str) -> String {
        hex::encode(Sha256::digest(descriptor.as_bytes()))
    }

    fn path(&self, descriptor: &str) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(descriptor)))
    }

    /// A stored entry whose descriptor matches exactly; unreadable files are misses.
    pub fn get(&self, descriptor: &str) -> Option<CacheEntry> {
        let text = std::fs::read_to_string(self.path(descriptor)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.descriptor == descriptor).then_some(entry)
    }

    pub fn put(&self, entry: &CacheEntry) -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        let text = serde_json::to_string_pretty(entry).map_err(std::io::Error::other)?;
        tmp.write_all(text.as_bytes())?;
        tmp.persist(self.path(&entry.descriptor)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Looks `descriptor` up, computing and storing it on a miss.
    pub fn get_or_compute(&self, descriptor: &str, compute: impl FnOnce() -> (PoincareSeries, bool)) -> (PoincareSeries, bool) {
        if let Some(e) = self.get(descriptor) {
            return (e.betti, e.cap_sensitive);
        }
        let (betti, cap_sensitive) = compute();
        let entry = CacheEntry {
            descriptor: descriptor.to_string(),
            betti,
            cap_sensitive,
        };
        // a failed write only costs a recomputation later
        let _ = self.put(&entry);
        (entry.betti, entry.cap_sensitive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        assert!(cache.get("a").is_none());
        let mut calls = 0;
        let mut run = || {
            cache.get_or_compute("a", || {
                calls += 1;
                (PoincareSeries::from_coeffs(vec![1, 2, 1]), false)
            })
        };
        let first = run();
        let second = run();
        assert_eq!(first, second);
        assert_eq!(calls, 1);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn corrupt_file_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        std::fs::write(cache.path("b"), "not json").unwrap();
        assert!(cache.get("b").is_none());
    }
}
