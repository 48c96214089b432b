use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::SystemTime;

use tstrace_core::trace::{read_trace_file, TRACE_SUFFIX};
use tstrace_core::{RunMeta, RunTrace};

/// Parsed traces keyed by file, reloaded when a file's mtime changes.
/// Files that fail to load are remembered (and logged once) until they change.
#[derive(Debug)]
pub struct TraceStore {
    dir: PathBuf,
    cache: RwLock<HashMap<PathBuf, Cached>>,
}

#[derive(Debug, Clone)]
struct Cached {
    modified: Option<SystemTime>,
    trace: Option<Arc<RunTrace>>,
}

impl TraceStore {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        Self { dir: dir.as_ref().to_path_buf(), cache: RwLock::new(HashMap::new()) }
    }

    fn trace_files(&self) -> Vec<PathBuf> {
        let entries = match fs::read_dir(&self.dir) {
            Ok(entries) => entries,
            Err(e) => {
                tracing::warn!(dir = %self.dir.display(), "cannot read trace directory: {e}");
                return Vec::new();
            }
        };
        let mut files: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.to_string_lossy().ends_with(TRACE_SUFFIX))
            .collect();
        files.sort();
        files
    }

    fn load(&self, path: &Path) -> Option<Arc<RunTrace>> {
        let modified = fs::metadata(path).and_then(|m| m.modified()).ok();
        if let Some(hit) = self.cache.read().expect("cache lock").get(path) {
            if hit.modified == modified && modified.is_some() {
                return hit.trace.clone();
            }
        }

        let trace = match read_trace_file(path) {
            Ok(trace) => Some(Arc::new(trace)),
            Err(e) => {
                tracing::warn!(file = %path.display(), "skipping invalid trace: {e}");
                None
            }
        };
        self.cache
            .write()
            .expect("cache lock")
            .insert(path.to_path_buf(), Cached { modified, trace: trace.clone() });
        trace
    }

    /// Every valid trace in the directory, in file-name order. When two files
    /// share a `run_id` the first one wins.
    pub fn traces(&self) -> Vec<Arc<RunTrace>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for path in self.trace_files() {
            if let Some(trace) = self.load(&path) {
                if seen.insert(trace.meta.run_id.clone()) {
                    out.push(trace);
                } else {
                    tracing::warn!(file = %path.display(), run_id = %trace.meta.run_id, "duplicate run_id ignored");
                }
            }
        }
        out
    }

    pub fn list(&self) -> Vec<RunMeta> {
        self.traces().iter().map(|t| t.meta.clone()).collect()
    }

    pub fn get(&self, run_id: &str) -> Option<Arc<RunTrace>> {
        self.traces().into_iter().find(|t| t.meta.run_id == run_id)
    }
}
