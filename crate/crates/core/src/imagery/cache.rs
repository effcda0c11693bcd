//! Image caches keyed by plan cache key.
//!
//! On disk: `<root>/<first 2 hex of key>/<key>.img` with a sidecar
//! `<key>.meta` holding one tab-separated line `uri  unix_timestamp  byte_length`.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

/// Concurrent reads; writes are serialized by the implementation.
pub trait ImageCache: Send + Sync {
    fn get(&self, key: &str) -> Option<Vec<u8>>;
    fn put(&self, key: &str, uri: &str, bytes: &[u8]) -> io::Result<()>;
}

#[derive(Debug, Default)]
pub struct MemoryCache {
    entries: RwLock<HashMap<String, Vec<u8>>>,
}

impl ImageCache for MemoryCache {
    fn get(&self, key: &str) -> Option<Vec<u8>> {
        self.entries.read().unwrap().get(key).cloned()
    }

    fn put(&self, key: &str, _uri: &str, bytes: &[u8]) -> io::Result<()> {
        self.entries.write().unwrap().insert(key.to_string(), bytes.to_vec());
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheMeta {
    pub uri: String,
    pub timestamp: u64,
    pub byte_length: u64,
}

#[derive(Debug)]
pub struct DiskCache {
    root: PathBuf,
    write_lock: Mutex<()>,
}

impl DiskCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DiskCache { root: root.into(), write_lock: Mutex::new(()) }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn shard(&self, key: &str) -> PathBuf {
        let prefix: String = key.chars().take(2).collect();
        self.root.join(prefix)
    }

    pub fn image_path(&self, key: &str) -> PathBuf {
        self.shard(key).join(format!("{key}.img"))
    }

    pub fn meta_path(&self, key: &str) -> PathBuf {
        self.shard(key).join(format!("{key}.meta"))
    }

    pub fn read_meta(&self, key: &str) -> io::Result<CacheMeta> {
        let text = fs::read_to_string(self.meta_path(key))?;
        let bad = || io::Error::new(io::ErrorKind::InvalidData, "malformed cache sidecar");
        let mut parts = text.trim_end_matches('\n').split('\t');
        let uri = parts.next().ok_or_else(bad)?.to_string();
        let timestamp = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let byte_length = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        Ok(CacheMeta { uri, timestamp, byte_length })
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(tmp, path)
}

impl ImageCache for DiskCache {
    fn get(&self, key: &str) -> Option<Vec<u8>> {
        let bytes = fs::read(self.image_path(key)).ok()?;
        // An image without a matching sidecar is an interrupted write.
        let meta = self.read_meta(key).ok()?;
        (meta.byte_length == bytes.len() as u64 && !bytes.is_empty()).then_some(bytes)
    }

    fn put(&self, key: &str, uri: &str, bytes: &[u8]) -> io::Result<()> {
        let _guard = self.write_lock.lock().unwrap();
        fs::create_dir_all(self.shard(key))?;
        write_atomic(&self.image_path(key), bytes)?;
        let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let line = format!("{}\t{}\t{}\n", uri.replace(['\t', '\n'], " "), ts, bytes.len());
        write_atomic(&self.meta_path(key), line.as_bytes())
    }
}
