//! Content-hashed cache of built complexes and posets. The key is the hash
//! of the build header; the payload is the serialized instance. Directory
//! defaults to `.cache/`, overridable through `STB_CACHE_DIR`.

use std::path::PathBuf;

pub fn cache_dir() -> PathBuf {
    match std::env::var_os("STB_CACHE_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(".cache"),
    }
}

pub fn get(key: &str) -> Option<String> {
    let path = cache_dir().join(format!("{key}.json"));
    std::fs::read_to_string(path).ok()
}

pub fn put(key: &str, contents: &str) {
    let dir = cache_dir();
    if std::fs::create_dir_all(&dir).is_err() {
        return; // cache is best-effort
    }
    let path = dir.join(format!("{key}.json"));
    let _ = std::fs::write(path, contents);
}
