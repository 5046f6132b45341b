//! Readers for the optional JSON fixtures under `fixtures/`.
//!
//! A missing file is not an error: loaders return `Ok(None)` and callers
//! decide whether to skip. A file that exists but does not parse is an
//! error. Algebra elements are flat residue lists in wire order (u-index
//! outer, l-index middle, K-coefficient inner).

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{ClweError, Result};

/// `skew_mult_q{q}.json`: every product of an `n = 1`, `d`-dimensional toy
/// algebra with `u^d = gamma`.
#[derive(Clone, Debug, Deserialize)]
pub struct SkewMultFixture {
    pub q: u64,
    pub d: usize,
    pub n: usize,
    /// `gamma` as a residue mod `q`.
    pub gamma: u64,
    pub products: Vec<ProductEntry>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ProductEntry {
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    pub product: Vec<u64>,
}

/// `gl_counts.json`: invertible matrix counts by enumeration.
#[derive(Clone, Debug, Deserialize)]
pub struct GlCountsFixture {
    pub entries: Vec<GlCount>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GlCount {
    pub q: u64,
    pub d: usize,
    pub invertible: u64,
    pub total: u64,
}

/// `qr_table_{q}.json`: the sorted nonzero squares mod `q`.
#[derive(Clone, Debug, Deserialize)]
pub struct QrTableFixture {
    pub q: u64,
    pub squares: Vec<u64>,
}

/// `fixtures/` at the workspace root.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn load<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<Option<T>> {
    let path = dir.join(name);
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(ClweError::Format(format!("{}: {e}", path.display()))),
    };
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| ClweError::Format(format!("{}: {e}", path.display())))
}

pub fn skew_mult(dir: &Path, q: u64) -> Result<Option<SkewMultFixture>> {
    load(dir, &format!("skew_mult_q{q}.json"))
}

pub fn gl_counts(dir: &Path) -> Result<Option<GlCountsFixture>> {
    load(dir, "gl_counts.json")
}

pub fn qr_table(dir: &Path, q: u64) -> Result<Option<QrTableFixture>> {
    load(dir, &format!("qr_table_{q}.json"))
}
