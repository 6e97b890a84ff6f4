//! MatrixMarket export with a hashed JSON manifest, and an on-disk cache
//! keyed by `(m, n, d, schema version)`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complex::bicomplex::{max_degree, Bicomplex, Caps, Normalization};
use crate::error::{Error, Result};
use crate::linalg::matrix_market;
use crate::linalg::sparse::SparseMatrix;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub file: String,
    pub sha256: String,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidegreeEntry {
    pub d: usize,
    pub n: usize,
    pub generators: usize,
    pub defensive_zeros: u64,
    pub h: FileEntry,
    pub v: Option<FileEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub m: usize,
    pub n_max: usize,
    pub normalization: Normalization,
    /// Column `n_max` receives `V` but emits none.
    pub truncated: bool,
    pub bidegrees: Vec<BidegreeEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_matrix(dir: &Path, file: String, m: &SparseMatrix) -> Result<FileEntry> {
    let text = matrix_market::to_string(m);
    let path = dir.join(&file);
    fs::write(&path, text.as_bytes()).map_err(|e| Error::io(&path, e))?;
    Ok(FileEntry { file, sha256: sha256_hex(text.as_bytes()), rows: m.nrows(), cols: m.ncols(), nnz: m.nnz() })
}

fn read_matrix(dir: &Path, entry: &FileEntry) -> Result<SparseMatrix> {
    let path = dir.join(&entry.file);
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let hash = sha256_hex(&bytes);
    if hash != entry.sha256 {
        return Err(Error::Invariant(format!("{} hash {hash} does not match manifest {}", path.display(), entry.sha256)));
    }
    let m = matrix_market::read(bytes.as_slice())?;
    if (m.nrows(), m.ncols(), m.nnz()) != (entry.rows, entry.cols, entry.nnz) {
        return Err(Error::Invariant(format!("{} shape disagrees with manifest", path.display())));
    }
    Ok(m)
}

/// Writes every `H` and `V` block plus `manifest.json` into `dir`.
pub fn export_bicomplex(b: &Bicomplex, dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tag = match b.normalization() {
        Normalization::Plain => "",
        Normalization::Conormalized => "n",
    };
    let mut bidegrees = Vec::new();
    for n in 0..=b.n_max() {
        for d in 0..=b.max_degree(n) {
            let h = write_matrix(dir, format!("{tag}h_n{n}_d{d}.mtx"), b.h(d, n).expect("built"))?;
            let v = b.v(d, n).map(|v| write_matrix(dir, format!("{tag}v_n{n}_d{d}.mtx"), v)).transpose()?;
            bidegrees.push(BidegreeEntry { d, n, generators: b.dim(d, n), defensive_zeros: b.defensive_zeros(d, n), h, v });
        }
    }
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        m: b.m(),
        n_max: b.n_max(),
        normalization: b.normalization(),
        truncated: b.is_truncated(),
        bidegrees,
    };
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

/// Reads a bicomplex back from an exported directory, verifying hashes.
pub fn import_bicomplex(dir: &Path) -> Result<Bicomplex> {
    let path = dir.join("manifest.json");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if manifest.schema_version != SCHEMA_VERSION {
        return Err(Error::Config(format!("manifest schema {} is not {SCHEMA_VERSION}", manifest.schema_version)));
    }
    let (m, n_max) = (manifest.m, manifest.n_max);
    let mut h: Vec<Vec<Option<SparseMatrix>>> = (0..=n_max).map(|n| vec![None; max_degree(m, n) + 1]).collect();
    let mut v: Vec<Vec<Option<SparseMatrix>>> = (0..n_max).map(|n| vec![None; max_degree(m, n) + 1]).collect();
    let mut zeros: Vec<Vec<u64>> = (0..n_max).map(|n| vec![0; max_degree(m, n) + 1]).collect();
    for e in &manifest.bidegrees {
        let slot = h.get_mut(e.n).and_then(|c| c.get_mut(e.d)).ok_or_else(|| Error::Parse(format!("bidegree ({}, {}) out of range", e.d, e.n)))?;
        *slot = Some(read_matrix(dir, &e.h)?);
        if let (Some(entry), Some(col)) = (&e.v, v.get_mut(e.n)) {
            col[e.d] = Some(read_matrix(dir, entry)?);
            zeros[e.n][e.d] = e.defensive_zeros;
        }
    }
    let missing = || Error::Parse("manifest does not list every bidegree".into());
    let h = h.into_iter().map(|c| c.into_iter().map(|x| x.ok_or_else(missing)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    let v = v.into_iter().map(|c| c.into_iter().map(|x| x.ok_or_else(missing)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Bicomplex::from_parts(m, manifest.normalization, h, v, zeros, None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CacheEntry {
    schema_version: u32,
    m: usize,
    n: usize,
    d: usize,
    defensive_zeros: u64,
    h: FileEntry,
    v: Option<FileEntry>,
}

fn cache_key(m: usize, n: usize, d: usize) -> String {
    format!("m{m}_n{n}_d{d}_s{SCHEMA_VERSION}")
}

fn cache_lookup(dir: &Path, m: usize, n: usize, d: usize, need_v: bool) -> Option<(SparseMatrix, Option<SparseMatrix>, u64)> {
    let text = fs::read_to_string(dir.join(format!("{}.json", cache_key(m, n, d)))).ok()?;
    let entry: CacheEntry = serde_json::from_str(&text).ok()?;
    if (entry.schema_version, entry.m, entry.n, entry.d) != (SCHEMA_VERSION, m, n, d) {
        return None;
    }
    let h = read_matrix(dir, &entry.h).ok()?;
    let v = match (&entry.v, need_v) {
        (Some(e), true) => Some(read_matrix(dir, e).ok()?),
        (None, true) => return None,
        (_, false) => None,
    };
    Some((h, v, entry.defensive_zeros))
}

/// Whether a [`load_or_build`] call was served from disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CacheOutcome {
    Hit,
    Miss,
}

/// Loads the plain bicomplex from `dir` when every bidegree is cached,
/// otherwise builds it and stores every bidegree.
pub fn load_or_build(m: usize, n_max: usize, caps: Caps, dir: &Path) -> Result<(Bicomplex, CacheOutcome)> {
    if let Some(b) = load_cached(m, n_max, dir)? {
        return Ok((b, CacheOutcome::Hit));
    }
    let (b, _) = Bicomplex::build(m, n_max, caps)?;
    store(&b, dir)?;
    Ok((b, CacheOutcome::Miss))
}

fn load_cached(m: usize, n_max: usize, dir: &Path) -> Result<Option<Bicomplex>> {
    let mut h = Vec::new();
    let mut v = Vec::new();
    let mut zeros = Vec::new();
    for n in 0..=n_max {
        let mut hc = Vec::new();
        let mut vc = Vec::new();
        let mut zc = Vec::new();
        for d in 0..=max_degree(m, n) {
            let Some((hm, vm, z)) = cache_lookup(dir, m, n, d, n < n_max) else { return Ok(None) };
            hc.push(hm);
            if let Some(vm) = vm {
                vc.push(vm);
                zc.push(z);
            }
        }
        h.push(hc);
        if n < n_max {
            v.push(vc);
            zeros.push(zc);
        }
    }
    Bicomplex::from_parts(m, Normalization::Plain, h, v, zeros, None).map(Some)
}

fn store(b: &Bicomplex, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for n in 0..=b.n_max() {
        for d in 0..=b.max_degree(n) {
            let key = cache_key(b.m(), n, d);
            let h = write_matrix(dir, format!("{key}.h.mtx"), b.h(d, n).expect("built"))?;
            let v = b.v(d, n).map(|v| write_matrix(dir, format!("{key}.v.mtx"), v)).transpose()?;
            // A cached V is never dropped when a smaller build revisits the key.
            let v = match (v, cache_lookup(dir, b.m(), n, d, true)) {
                (None, Some(_)) => continue,
                (v, _) => v,
            };
            let entry = CacheEntry {
                schema_version: SCHEMA_VERSION,
                m: b.m(),
                n,
                d,
                defensive_zeros: b.defensive_zeros(d, n),
                h,
                v,
            };
            let path: PathBuf = dir.join(format!("{key}.json"));
            fs::write(&path, serde_json::to_string_pretty(&entry).expect("entry serializes") + "\n").map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}
