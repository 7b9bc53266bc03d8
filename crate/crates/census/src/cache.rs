//! On-disk μ cache: a JSON array of records, each carrying a SHA-256
//! checksum over its fields. Records that fail the check are dropped and
//! the corresponding cells get recomputed.

use std::path::{Path, PathBuf};

use census_core::enumerate::{Filter, ModeKind, MuKey, MuTable};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CensusError, Result};

pub const CACHE_ENV: &str = "CHAOS_CENSUS_CACHE";
pub const DEFAULT_CACHE_FILE: &str = "mu-cache.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub l: u32,
    pub p: u32,
    pub mode: String,
    pub filter: String,
    pub value: String,
    pub checksum: String,
}

impl CacheRecord {
    pub fn new(key: &MuKey, value: &BigUint) -> Self {
        let mode = key.mode.name().to_string();
        let filter = key.filter.name().to_string();
        let value = value.to_str_radix(10);
        let checksum = checksum(key.l, key.p, &mode, &filter, &value);
        CacheRecord { l: key.l, p: key.p, mode, filter, value, checksum }
    }

    /// The decoded entry, or `None` when the record is damaged.
    pub fn decode(&self) -> Option<(MuKey, BigUint)> {
        if checksum(self.l, self.p, &self.mode, &self.filter, &self.value) != self.checksum {
            return None;
        }
        let mode: ModeKind = self.mode.parse().ok()?;
        let filter: Filter = self.filter.parse().ok()?;
        let value = BigUint::parse_bytes(self.value.as_bytes(), 10)?;
        Some((MuKey { l: self.l, p: self.p, mode, filter }, value))
    }
}

pub fn checksum(l: u32, p: u32, mode: &str, filter: &str, value: &str) -> String {
    let text = format!("l={l};p={p};mode={mode};filter={filter};value={value}");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// `$CHAOS_CENSUS_CACHE` if set, otherwise `mu-cache.json`.
pub fn default_path() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_FILE))
}

#[derive(Clone, Debug, Default)]
pub struct Loaded {
    pub table: MuTable,
    /// Records dropped for a bad checksum or undecodable fields.
    pub rejected: usize,
    /// Set when the file itself was not a valid record array.
    pub unreadable: bool,
}

/// Reads a cache file. A missing file is an empty cache; a damaged one is
/// reported and ignored rather than trusted. A cell missing any filter
/// entry counts as absent, so a damaged record forces recomputation.
pub fn load(path: &Path) -> Result<Loaded> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Loaded::default()),
        Err(e) => return Err(CensusError::io(path, e)),
    };
    let records: Vec<CacheRecord> = match serde_json::from_str(&text) {
        Ok(r) => r,
        Err(_) => return Ok(Loaded { unreadable: true, ..Loaded::default() }),
    };
    let mut out = Loaded::default();
    for r in &records {
        match r.decode() {
            Some((k, v)) => out.table.insert(k, v),
            None => out.rejected += 1,
        }
    }
    Ok(out)
}

pub fn records(table: &MuTable) -> Vec<CacheRecord> {
    table.iter().map(|(k, v)| CacheRecord::new(k, v)).collect()
}

/// Writes the table through a temporary sibling and a rename.
pub fn save(path: &Path, table: &MuTable) -> Result<()> {
    let json = serde_json::to_string_pretty(&records(table))?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, json + "\n").map_err(|e| CensusError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CensusError::io(path, e))
}
