//! Optional on-disk reuse of conjugacy data.  Entries are keyed by a
//! digest of the group descriptor and the code version, and carry a
//! digest trailer so corrupted or truncated files fall back to a clean
//! recomputation.

use std::fs;
use std::path::{Path, PathBuf};

use repzeta_core::groups::{conjugacy_classes, enumerate_group, ConjugacyData, GroupSpec};
use repzeta_core::{Budgets, Result};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "REPZETA_CACHE";

const TRAILER: usize = 32;

/// Cache directory from the environment, if configured.
pub fn env_cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(PathBuf::from)
}

/// File name for a group's entry: scheme plus a descriptor digest that
/// also folds in the code version, so version bumps miss cleanly.
pub fn cache_key(spec: &GroupSpec) -> String {
    let mut h = Sha256::new();
    h.update(spec.descriptor_json().to_string().as_bytes());
    h.update(b"|");
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    let digest = h.finalize();
    let hex: String = digest.iter().take(12).map(|b| format!("{b:02x}")).collect();
    format!("{}{}-{hex}.conj", spec.scheme.name().to_lowercase(), spec.n)
}

fn read_checked(path: &Path) -> Option<Vec<u8>> {
    let bytes = fs::read(path).ok()?;
    if bytes.len() < TRAILER {
        return None;
    }
    let (payload, digest) = bytes.split_at(bytes.len() - TRAILER);
    if Sha256::digest(payload).as_slice() != digest {
        return None;
    }
    Some(payload.to_vec())
}

fn write_entry(path: &Path, data: &ConjugacyData) {
    let mut bytes = data.to_cache_bytes();
    let digest = Sha256::digest(&bytes);
    bytes.extend_from_slice(&digest);
    if let Some(parent) = path.parent() {
        let _ = fs::create_dir_all(parent);
    }
    if fs::write(path, &bytes).is_err() {
        eprintln!("warning: could not write cache entry {}", path.display());
    }
}

/// Loads conjugacy data through the cache when a directory is given.
/// Any read, digest, or format failure recomputes and rewrites the
/// entry.  Returns the data and whether the load was a cache hit.
pub fn load_or_compute(
    spec: &GroupSpec,
    budgets: &Budgets,
    dir: Option<&Path>,
) -> Result<(ConjugacyData, bool)> {
    if let Some(dir) = dir {
        let path = dir.join(cache_key(spec));
        if let Some(payload) = read_checked(&path) {
            let group = enumerate_group(spec, budgets)?;
            if let Ok(data) = ConjugacyData::from_cache_bytes(group, &payload) {
                return Ok((data, true));
            }
        }
        let group = enumerate_group(spec, budgets)?;
        let data = conjugacy_classes(group, budgets)?;
        write_entry(&path, &data);
        Ok((data, false))
    } else {
        let group = enumerate_group(spec, budgets)?;
        Ok((conjugacy_classes(group, budgets)?, false))
    }
}
