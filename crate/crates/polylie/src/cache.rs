//! On-disk cache of cluster symbol bases.
//!
//! One file per `(weight, points)`. The first line carries the version
//! hash, the second the key, the third the sha256 of the body. The body
//! lists the echelon rows in canonical text, one per line.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::cluster::Chord;
use crate::exactalg::{parse_sparse, LinSpace, SparseVec};
use crate::words::{fmt_word, parse_word, Word};

pub const CACHE_ENV: &str = "POLYLIE_CACHE_DIR";
const FORMAT: &str = "polylie-basis-v1";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("io error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {reason}")]
    Corrupt { path: String, reason: String },
    #[error("{path}: written by version {found}, current is {current}")]
    Stale { path: String, found: String, current: String },
}

/// Hash identifying the crate version and the cache format.
pub fn version_hash() -> String {
    let mut h = Sha256::new();
    h.update(FORMAT.as_bytes());
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    hex::encode(&h.finalize()[..8])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CacheKey {
    pub weight: usize,
    pub points: usize,
}

impl CacheKey {
    fn file_name(&self) -> String {
        format!("cl-w{}-p{}.basis", self.weight, self.points)
    }

    fn header(&self) -> String {
        format!("key cl weight={} points={}", self.weight, self.points)
    }

    fn from_header(s: &str) -> Option<CacheKey> {
        let rest = s.strip_prefix("key cl weight=")?;
        let (w, p) = rest.split_once(" points=")?;
        Some(CacheKey { weight: w.parse().ok()?, points: p.parse().ok()? })
    }
}

/// Result of verifying one file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryStatus {
    pub path: PathBuf,
    pub key: Option<CacheKey>,
    pub ok: bool,
    pub message: String,
}

pub struct BasisCache {
    dir: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CacheError + '_ {
    move |source| CacheError::Io { path: path.display().to_string(), source }
}

fn row_text(v: &SparseVec<Word<Chord>>) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = v.iter().map(|(w, c)| format!("{c}*{}", fmt_word(w))).collect();
    terms.join(" + ")
}

fn body_hash(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

impl BasisCache {
    pub fn new(dir: impl Into<PathBuf>) -> BasisCache {
        BasisCache { dir: dir.into() }
    }

    /// Directory from the explicit flag, else from `POLYLIE_CACHE_DIR`.
    pub fn from_flag_or_env(flag: Option<&Path>) -> Option<BasisCache> {
        flag.map(Path::to_path_buf).or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from)).map(BasisCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    pub fn store(&self, key: CacheKey, space: &LinSpace<Word<Chord>>) -> Result<PathBuf, CacheError> {
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let mut body = String::new();
        for r in space.rows() {
            body.push_str(&row_text(r));
            body.push('\n');
        }
        let text = format!("{}\n{}\ncontent {}\n{}", version_hash(), key.header(), body_hash(&body), body);
        let path = self.path(key);
        fs::write(&path, text).map_err(io_err(&path))?;
        Ok(path)
    }

    /// Loads a basis. A missing file is `Ok(None)`; anything unreadable or
    /// inconsistent is an error.
    pub fn load(&self, key: CacheKey) -> Result<Option<LinSpace<Word<Chord>>>, CacheError> {
        let path = self.path(key);
        if !path.exists() {
            return Ok(None);
        }
        let (_, rows) = read_file(&path)?;
        Ok(Some(LinSpace::from_rows(rows.iter())))
    }

    /// Cache files in the directory, sorted by name.
    pub fn list(&self) -> Result<Vec<PathBuf>, CacheError> {
        if !self.dir.exists() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for e in fs::read_dir(&self.dir).map_err(io_err(&self.dir))? {
            let p = e.map_err(io_err(&self.dir))?.path();
            if p.extension().is_some_and(|x| x == "basis") {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn clear(&self) -> Result<usize, CacheError> {
        let files = self.list()?;
        for p in &files {
            fs::remove_file(p).map_err(io_err(p))?;
        }
        Ok(files.len())
    }

    /// Re-hashes every entry. Failing entries are deleted.
    pub fn verify(&self) -> Result<Vec<EntryStatus>, CacheError> {
        let mut out = Vec::new();
        for path in self.list()? {
            let st = match read_file(&path) {
                Ok((key, rows)) => EntryStatus { path, key: Some(key), ok: true, message: format!("{} rows", rows.len()) },
                Err(e) => {
                    let _ = fs::remove_file(&path);
                    EntryStatus { path, key: None, ok: false, message: format!("{e}; entry removed") }
                }
            };
            out.push(st);
        }
        Ok(out)
    }
}

fn read_file(path: &Path) -> Result<(CacheKey, Vec<SparseVec<Word<Chord>>>), CacheError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let corrupt = |reason: &str| CacheError::Corrupt { path: path.display().to_string(), reason: reason.to_string() };
    let mut parts = text.splitn(4, '\n');
    let version = parts.next().ok_or_else(|| corrupt("empty file"))?;
    if version != version_hash() {
        return Err(CacheError::Stale { path: path.display().to_string(), found: version.to_string(), current: version_hash() });
    }
    let key = parts.next().and_then(CacheKey::from_header).ok_or_else(|| corrupt("bad key line"))?;
    let hash = parts.next().and_then(|l| l.strip_prefix("content ")).ok_or_else(|| corrupt("bad content line"))?;
    let body = parts.next().unwrap_or("");
    if body_hash(body) != hash {
        return Err(corrupt("content hash mismatch"));
    }
    let rows = body
        .lines()
        .map(|l| parse_sparse(l, |w| parse_word(w, |c| c.parse::<Chord>())))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| corrupt(&e))?;
    Ok((key, rows))
}
