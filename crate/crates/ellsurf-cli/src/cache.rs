//! Persistent trace cache: one file per (model, prime, base degree), holding
//! `level rep_index trace` records with an integrity checksum. Corrupted
//! files are quarantined, never silently reused. Writes go through a single
//! writer at flush time; lookups are a sorted in-memory map.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ellsurf_core::counting::TraceCacheHook;

use crate::spec::sha256_hex;

pub struct FileTraceCache {
    path: PathBuf,
    entries: BTreeMap<(usize, u64), i64>,
    dirty: bool,
    pub hits: u64,
    pub misses: u64,
    pub quarantined: bool,
}

impl FileTraceCache {
    /// Stable cache key: model hash + reduction data.
    pub fn cache_file(dir: &Path, model_key: &str, p: u64, e: usize) -> PathBuf {
        dir.join(format!("{model_key}-p{p}-e{e}.trace"))
    }

    pub fn open(dir: &Path, model_key: &str, p: u64, e: usize) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let path = Self::cache_file(dir, model_key, p, e);
        let mut cache = FileTraceCache {
            path: path.clone(),
            entries: BTreeMap::new(),
            dirty: false,
            hits: 0,
            misses: 0,
            quarantined: false,
        };
        if path.exists() {
            match Self::read_file(&path) {
                Ok(entries) => cache.entries = entries,
                Err(_) => {
                    // checksum mismatch: quarantine and start fresh
                    let mut q = path.clone();
                    q.set_extension("trace.quarantined");
                    let _ = std::fs::rename(&path, &q);
                    cache.quarantined = true;
                }
            }
        }
        Ok(cache)
    }

    fn read_file(path: &Path) -> std::io::Result<BTreeMap<(usize, u64), i64>> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("");
        let expect = header.strip_prefix("checksum = ").ok_or_else(|| {
            std::io::Error::new(std::io::ErrorKind::InvalidData, "missing checksum")
        })?;
        let body: Vec<&str> = lines.collect();
        let body_text = body.join("\n");
        if sha256_hex(body_text.as_bytes()) != expect {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                "checksum mismatch",
            ));
        }
        let mut entries = BTreeMap::new();
        for line in body {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let d: usize = it
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidData, "level"))?;
            let rep: u64 = it
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidData, "rep"))?;
            let tr: i64 = it
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidData, "trace"))?;
            entries.insert((d, rep), tr);
        }
        Ok(entries)
    }

    pub fn flush(&mut self) -> std::io::Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let mut body = String::new();
        for ((d, rep), tr) in &self.entries {
            body.push_str(&format!("{d} {rep} {tr}\n"));
        }
        let body = body.trim_end().to_string();
        let content = format!("checksum = {}\n{}\n", sha256_hex(body.as_bytes()), body);
        std::fs::write(&self.path, content)?;
        self.dirty = false;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn stats_by_level(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (d, _) in self.entries.keys() {
            *out.entry(*d).or_insert(0) += 1;
        }
        out
    }

    pub fn clear(&mut self) -> std::io::Result<()> {
        self.entries.clear();
        self.dirty = false;
        if self.path.exists() {
            std::fs::remove_file(&self.path)?;
        }
        Ok(())
    }

    /// Deterministically sample about `percent`% of the entries for an
    /// audit; the seed comes from the body checksum so reruns agree.
    pub fn audit_sample(&self, percent: u64) -> Vec<(usize, u64, i64)> {
        let mut seed = 0u64;
        for (i, b) in self.path.to_string_lossy().bytes().enumerate() {
            seed = seed.wrapping_mul(31).wrapping_add(b as u64 + i as u64);
        }
        let mut rng = ellsurf_core::field::SplitMix64::new(seed ^ self.entries.len() as u64);
        let mut out = Vec::new();
        for ((d, rep), tr) in &self.entries {
            if rng.below(100) < percent {
                out.push((*d, *rep, *tr));
            }
        }
        if out.is_empty() {
            if let Some(((d, rep), tr)) = self.entries.iter().next() {
                out.push((*d, *rep, *tr));
            }
        }
        out
    }

    pub fn get_entry(&self, level: usize, rep: u64) -> Option<i64> {
        self.entries.get(&(level, rep)).copied()
    }
}

impl TraceCacheHook for FileTraceCache {
    fn get(&mut self, level: usize, rep_index: u64) -> Option<i64> {
        match self.entries.get(&(level, rep_index)) {
            Some(v) => {
                self.hits += 1;
                Some(*v)
            }
            None => {
                self.misses += 1;
                None
            }
        }
    }

    fn put(&mut self, level: usize, rep_index: u64, trace: i64) {
        self.entries.insert((level, rep_index), trace);
        self.dirty = true;
    }
}

impl Drop for FileTraceCache {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_checksum() {
        let dir = tempfile::tempdir().unwrap();
        {
            let mut c = FileTraceCache::open(dir.path(), "m0", 17, 1).unwrap();
            c.put(1, 3, -5);
            c.put(2, 100, 42);
            c.flush().unwrap();
        }
        {
            let mut c = FileTraceCache::open(dir.path(), "m0", 17, 1).unwrap();
            assert_eq!(c.get(1, 3), Some(-5));
            assert_eq!(c.get(2, 100), Some(42));
            assert_eq!(c.get(2, 101), None);
            assert_eq!(c.hits, 2);
            assert_eq!(c.misses, 1);
        }
        // corrupt the file: it must be quarantined
        let path = FileTraceCache::cache_file(dir.path(), "m0", 17, 1);
        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("9 9 9\n");
        std::fs::write(&path, text).unwrap();
        let c = FileTraceCache::open(dir.path(), "m0", 17, 1).unwrap();
        assert!(c.quarantined);
        assert!(c.is_empty());
        assert!(!path.exists());
    }
}
