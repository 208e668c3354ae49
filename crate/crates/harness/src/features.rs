//! Parallel feature extraction with an on-disk cache.
//!
//! Cache entries live at `<root>/.chaostex-cache/<config hash>/<content hash>.bin`
//! where both hashes are SHA-256 (config truncated to 16 hex digits). An entry
//! is a `u64` count followed by that many little-endian `f64`s, so cached and
//! fresh values are bit-identical.

use std::fs;
use std::path::{Path, PathBuf};

use chaostex_core::descriptor::{extract, extract_plain};
use chaostex_core::PcaDims;
use log::{debug, warn};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::dataset::{to_gray, DatasetIndex};
use crate::error::{HarnessError, Result};
use crate::table::{FeatureKind, FeatureTable, TableMeta};

pub const CACHE_DIR: &str = ".chaostex-cache";
const CACHE_FORMAT: &str = "chaostex-cache-v1";

#[derive(Debug, Clone, Copy)]
pub struct ExtractOptions {
    pub use_cache: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { use_cache: true }
    }
}

/// Identifies everything that influences the feature values. PCA settings do not.
pub fn config_hash(meta: &TableMeta) -> Result<String> {
    let mut keyed = meta.clone();
    keyed.descriptor.pca_dims = PcaDims::Auto;
    let mut h = Sha256::new();
    h.update(CACHE_FORMAT.as_bytes());
    h.update(serde_json::to_vec(&keyed)?);
    Ok(hex::encode(h.finalize())[..16].to_string())
}

fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_cache(path: &Path, expected: usize) -> Option<Vec<f64>> {
    let bytes = fs::read(path).ok()?;
    let (head, body) = bytes.split_at_checked(8)?;
    let n = u64::from_le_bytes(head.try_into().ok()?) as usize;
    if n != expected || body.len() != n * 8 {
        warn!("ignoring malformed cache entry {}", path.display());
        return None;
    }
    Some(body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
}

fn write_cache(path: &Path, values: &[f64]) -> std::io::Result<()> {
    let mut bytes = Vec::with_capacity(8 + values.len() * 8);
    bytes.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    // Unique temp name per worker, then an atomic rename.
    let tmp = path.with_extension(format!("tmp{}-{}", std::process::id(), rayon::current_thread_index().unwrap_or(0)));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

fn compute(bytes: &[u8], meta: &TableMeta) -> Result<Vec<f64>> {
    let img = image::load_from_memory(bytes).map_err(|e| HarnessError::data(e.to_string()))?;
    let gray = to_gray(&img)?;
    Ok(match meta.kind {
        FeatureKind::Chaos => extract(&gray, &meta.descriptor)?.values,
        FeatureKind::Plain => extract_plain(&gray, &meta.descriptor)?,
    })
}

/// Features for every image in `index`, in index order.
pub fn extract_dataset(index: &DatasetIndex, meta: &TableMeta, options: ExtractOptions) -> Result<FeatureTable> {
    let expected = meta.columns()?.len();
    let cache_dir: Option<PathBuf> = if options.use_cache {
        let dir = index.root.join(CACHE_DIR).join(config_hash(meta)?);
        match fs::create_dir_all(&dir) {
            Ok(()) => Some(dir),
            Err(e) => {
                warn!("feature cache disabled, cannot create {}: {e}", dir.display());
                None
            }
        }
    } else {
        None
    };

    let samples = index.samples();
    let values = samples
        .par_iter()
        .map(|s| {
            let path = index.absolute(s);
            let bytes = fs::read(&path).map_err(|e| HarnessError::io(&path, e))?;
            let entry = cache_dir.as_ref().map(|d| d.join(format!("{}.bin", content_hash(&bytes))));
            if let Some(hit) = entry.as_deref().and_then(|p| read_cache(p, expected)) {
                debug!("cache hit for {}", s.path);
                return Ok(hit);
            }
            let values = compute(&bytes, meta).map_err(|e| match e {
                HarnessError::Data(m) => HarnessError::data(format!("{}: {m}", s.path)),
                HarnessError::Usage(m) => HarnessError::usage(format!("{}: {m}", s.path)),
                HarnessError::Numerical(m) => HarnessError::Numerical(format!("{}: {m}", s.path)),
                other => other,
            })?;
            if let Some(p) = &entry {
                if let Err(e) = write_cache(p, &values) {
                    warn!("could not write cache entry {}: {e}", p.display());
                }
            }
            Ok(values)
        })
        .collect::<Result<Vec<_>>>()?;
    FeatureTable::new(meta.clone(), samples, values)
}
