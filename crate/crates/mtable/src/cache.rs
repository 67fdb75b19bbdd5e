//! On-disk cache of `M(n)`: a CSV file with header `n,m`, rows sorted by
//! `n` with no duplicates.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::AppError;

#[derive(Debug, Clone)]
pub struct CensusCache {
    path: PathBuf,
    entries: BTreeMap<u64, u64>,
}

impl CensusCache {
    /// Opens the cache at `path`. A missing file is an empty cache; any
    /// malformed content is an [`AppError::Cache`].
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, AppError> {
        let path = path.into();
        let entries = match fs::read(&path) {
            Ok(bytes) => parse(&bytes).map_err(|reason| AppError::Cache {
                path: path.display().to_string(),
                reason,
            })?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(CensusCache { path, entries })
    }

    /// An empty cache that will overwrite whatever is at `path`.
    pub fn empty(path: impl Into<PathBuf>) -> Self {
        CensusCache {
            path: path.into(),
            entries: BTreeMap::new(),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, n: u64) -> Option<u64> {
        self.entries.get(&n).copied()
    }

    pub fn insert(&mut self, n: u64, m: u64) {
        self.entries.insert(n, m);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes all entries, replacing the file atomically.
    pub fn save(&self) -> Result<(), AppError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["n", "m"]).map_err(csv_io)?;
        for (n, m) in &self.entries {
            writer
                .write_record([n.to_string(), m.to_string()])
                .map_err(csv_io)?;
        }
        let bytes = writer.into_inner().map_err(|e| e.into_error())?;
        let tmp = self.path.with_extension("csv.tmp");
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}

fn csv_io(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn parse(bytes: &[u8]) -> Result<BTreeMap<u64, u64>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let header = reader.headers().map_err(|e| e.to_string())?;
    if header != vec!["n", "m"] {
        return Err(format!("expected header `n,m`, found `{}`", header.iter().collect::<Vec<_>>().join(",")));
    }
    let mut entries = BTreeMap::new();
    let mut last = 0;
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let field = |i: usize| -> Result<u64, String> {
            record
                .get(i)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| format!("row {}: expected two non-negative integers", line + 1))
        };
        let (n, m) = (field(0)?, field(1)?);
        if n <= last {
            return Err(format!("row {}: n = {n} is out of order or duplicated", line + 1));
        }
        if n == 0 || m == 0 || m > n.saturating_mul(n) {
            return Err(format!("row {}: M({n}) = {m} is impossible", line + 1));
        }
        last = n;
        entries.insert(n, m);
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_well_formed() {
        let e = parse(b"n,m\n10,42\n100,2906\n").unwrap();
        assert_eq!(e.get(&100), Some(&2906));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse(b"n,count\n10,42\n").is_err());
        assert!(parse(b"n,m\n100,2906\n10,42\n").is_err());
        assert!(parse(b"n,m\n10,42\n10,42\n").is_err());
        assert!(parse(b"n,m\n10,x\n").is_err());
        assert!(parse(b"n,m\n10,101\n").is_err());
    }

    #[test]
    fn save_and_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.csv");
        let mut cache = CensusCache::open(&path).unwrap();
        assert!(cache.is_empty());
        cache.insert(100, 2906);
        cache.insert(10, 42);
        cache.save().unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "n,m\n10,42\n100,2906\n");
        assert_eq!(CensusCache::open(&path).unwrap().get(10), Some(42));
    }
}
