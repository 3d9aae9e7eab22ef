//! On-disk cache for the raw (oracle) censuses, the only slow enumerations
//! whose results are plain integers. One JSON file per key; the key spells
//! out every parameter the enumeration depends on.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "K1HECKE_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    count: u64,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

/// Flag, then config, then the environment; no cache if none is set.
pub fn resolve_dir(flag: Option<&Path>, config: Option<&Path>) -> Option<PathBuf> {
    flag.or(config)
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        let name: String = key.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
        self.dir.join(format!("{name}.json"))
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        (e.key == key).then_some(e.count)
    }

    pub fn put(&self, key: &str, count: u64) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let e = Entry { key: key.to_string(), count };
        fs::write(self.path(key), serde_json::to_string(&e).expect("entry serializes"))
    }

    /// Cached value, or computes and stores it. Write failures are ignored:
    /// the cache is an optimization only.
    pub fn get_or<E>(&self, key: &str, f: impl FnOnce() -> Result<u64, E>) -> Result<u64, E> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = f()?;
        let _ = self.put(key, v);
        Ok(v)
    }

    pub fn list(&self) -> std::io::Result<Vec<(String, u64)>> {
        let mut out = Vec::new();
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e),
        };
        for ent in rd {
            let p = ent?.path();
            if p.extension().and_then(|s| s.to_str()) != Some("json") {
                continue;
            }
            if let Some(e) = fs::read_to_string(&p).ok().and_then(|t| serde_json::from_str::<Entry>(&t).ok()) {
                out.push((e.key, e.count));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Removes the entries this cache wrote; other files are left alone.
    pub fn clear(&self) -> std::io::Result<usize> {
        let keys = self.list()?;
        for (k, _) in &keys {
            fs::remove_file(self.path(k))?;
        }
        Ok(keys.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_list_clear() {
        let dir = std::env::temp_dir().join(format!("k1hecke-cache-test-{}", std::process::id()));
        let c = Cache::new(&dir);
        assert_eq!(c.get("raw-a GL n2"), None);
        assert_eq!(c.get_or::<()>("raw-a GL n2", || Ok(9)), Ok(9));
        assert_eq!(c.get_or::<()>("raw-a GL n2", || Err(())), Ok(9));
        fs::write(dir.join("notes.txt"), "keep").unwrap();
        assert_eq!(c.list().unwrap(), vec![("raw-a GL n2".to_string(), 9)]);
        assert_eq!(c.clear().unwrap(), 1);
        assert!(dir.join("notes.txt").exists());
        fs::remove_dir_all(&dir).unwrap();
    }
}
