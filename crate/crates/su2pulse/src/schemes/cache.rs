//! Persistent table of solved phase schedules.
//!
//! One JSON document maps `"<kind>:<M>"` to the solved phases together with
//! the verified flat order, the final residual, and the solver settings that
//! produced them. Writes replace the whole file atomically (temp + rename,
//! last writer wins); readers treat a missing or unreadable file as empty and
//! recompute.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use super::solver::{self, solve_phases};
use super::{PhaseSchedule, SchemeKind};
use crate::error::Result;

/// Solver configuration recorded next to each cached schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub multi_starts: usize,
    pub random_seed: u64,
    pub max_iterations: usize,
    pub residual_tolerance: f64,
    pub fd_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub kind: SchemeKind,
    pub count: usize,
    pub phases: Vec<f64>,
    pub flat_order: usize,
    pub residual: f64,
    pub solver_settings: SolverSettings,
}

/// File-backed schedule cache.
#[derive(Debug, Clone)]
pub struct PhaseCache {
    path: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl PhaseCache {
    pub fn at(path: impl Into<PathBuf>) -> Self {
        PhaseCache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All cached entries; empty on a missing or malformed file.
    pub fn entries(&self) -> BTreeMap<String, CacheEntry> {
        match fs::read_to_string(&self.path) {
            Ok(text) => serde_json::from_str(&text).unwrap_or_default(),
            Err(_) => BTreeMap::new(),
        }
    }

    /// Look up a cached schedule.
    pub fn get(&self, kind: SchemeKind, count: usize) -> Option<PhaseSchedule> {
        let entry = self.entries().remove(&key(kind, count))?;
        PhaseSchedule::new(entry.kind, entry.phases, entry.flat_order).ok()
    }

    /// Insert or replace one entry, rewriting the whole file atomically.
    pub fn put(&self, entry: CacheEntry) -> io::Result<()> {
        let mut entries = self.entries();
        entries.insert(key(entry.kind, entry.count), entry);
        let text = serde_json::to_string_pretty(&entries).map_err(io::Error::other)?;
        let tmp = self.temp_path();
        if let Some(parent) = self.path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        fs::write(&tmp, text + "\n")?;
        fs::rename(&tmp, &self.path)
    }

    /// Cached schedule if present, otherwise solve and cache it. A failed
    /// cache write is not an error here; the solved schedule is still
    /// returned and the next run recomputes.
    pub fn solve_or_load(&self, kind: SchemeKind, count: usize) -> Result<PhaseSchedule> {
        if let Some(schedule) = self.get(kind, count) {
            return Ok(schedule);
        }
        let (schedule, residual) = solve_phases(kind, count)?;
        let _ = self.put(CacheEntry {
            kind,
            count,
            phases: schedule.phases().to_vec(),
            flat_order: schedule.flat_order(),
            residual,
            solver_settings: solver::settings(),
        });
        Ok(schedule)
    }

    fn temp_path(&self) -> PathBuf {
        let nonce = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let name = self
            .path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "phase-cache".to_string());
        self.path
            .with_file_name(format!(".{name}.{}.{nonce}.tmp", std::process::id()))
    }
}

fn key(kind: SchemeKind, count: usize) -> String {
    format!("{kind}:{count}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn sample_entry() -> CacheEntry {
        CacheEntry {
            kind: SchemeKind::Broadband,
            count: 3,
            phases: vec![0.0, 2.0943951023931953, 0.0],
            flat_order: 6,
            residual: 1e-16,
            solver_settings: solver::settings(),
        }
    }

    #[test]
    fn roundtrip() {
        let dir = tempdir().unwrap();
        let cache = PhaseCache::at(dir.path().join("phases.json"));
        assert!(cache.get(SchemeKind::Broadband, 3).is_none());
        cache.put(sample_entry()).unwrap();
        let schedule = cache.get(SchemeKind::Broadband, 3).unwrap();
        assert_eq!(schedule.count(), 3);
        assert_eq!(schedule.flat_order(), 6);
        assert!(cache.get(SchemeKind::Broadband, 5).is_none());
        assert!(cache.get(SchemeKind::Narrowband, 3).is_none());
    }

    #[test]
    fn tolerates_corrupt_file() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("phases.json");
        fs::write(&path, "{ not json").unwrap();
        let cache = PhaseCache::at(&path);
        assert!(cache.entries().is_empty());
        cache.put(sample_entry()).unwrap();
        assert_eq!(cache.entries().len(), 1);
    }

    #[test]
    fn solve_or_load_hits_cache() {
        let dir = tempdir().unwrap();
        let cache = PhaseCache::at(dir.path().join("phases.json"));
        let solved = cache.solve_or_load(SchemeKind::Broadband, 3).unwrap();
        // Tamper with the stored phases and confirm the next load uses them
        // (i.e. the solver is not re-run).
        let mut entry = cache.entries().remove("broadband:3").unwrap();
        entry.phases = vec![0.0, 1.0, 0.0];
        cache.put(entry).unwrap();
        let reloaded = cache.solve_or_load(SchemeKind::Broadband, 3).unwrap();
        assert_ne!(reloaded.phases(), solved.phases());
        assert_eq!(reloaded.phases()[1], 1.0);
    }
}
