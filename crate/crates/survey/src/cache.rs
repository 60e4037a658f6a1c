//! Append-only JSONL cache of survey rows.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use plumbing::format::canonical_string;
use plumbing::PlumbingGraph;

use crate::survey::SurveyRow;
use crate::SurveyError;

pub const CACHE_ENV: &str = "PLUMB_HF_CACHE";
pub const DEFAULT_CACHE: &str = "plumb-hf-cache.jsonl";

/// SHA-256 of the canonical (sorted, nameless) graph serialization.
pub fn graph_hash(g: &PlumbingGraph) -> String {
    hex::encode(Sha256::digest(canonical_string(g).as_bytes()))
}

/// Cache path: explicit flag, then `PLUMB_HF_CACHE`, then the default.
pub fn resolve_path(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_owned();
    }
    match std::env::var_os(CACHE_ENV) {
        Some(p) if !p.is_empty() => PathBuf::from(p),
        _ => PathBuf::from(DEFAULT_CACHE),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Entry {
    key: String,
    row: SurveyRow,
}

#[derive(Debug, Default)]
pub struct Cache {
    path: Option<PathBuf>,
    rows: HashMap<String, SurveyRow>,
}

impl Cache {
    /// A cache that is never written.
    pub fn in_memory() -> Self {
        Cache::default()
    }

    /// Loads every entry of `path`; a missing file is an empty cache. Later
    /// lines win over earlier ones with the same key.
    pub fn open(path: &Path) -> Result<Self, SurveyError> {
        let mut rows = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let entry: Entry = serde_json::from_str(&line).map_err(|e| {
                    SurveyError::Cache(format!("{}:{}: {e}", path.display(), lineno + 1))
                })?;
                rows.insert(entry.key, entry.row);
            }
        }
        Ok(Cache {
            path: Some(path.to_owned()),
            rows,
        })
    }

    pub fn key(family: &str, hash: &str, early_stop: Option<usize>) -> String {
        match early_stop {
            Some(k) => format!("{family}/{hash}/stop={k}"),
            None => format!("{family}/{hash}/full"),
        }
    }

    pub fn get(&self, key: &str) -> Option<&SurveyRow> {
        self.rows.get(key)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Appends new rows in the given order through a single writer.
    pub fn append(&mut self, entries: Vec<(String, SurveyRow)>) -> Result<(), SurveyError> {
        if let Some(path) = &self.path {
            if !entries.is_empty() {
                let mut file = OpenOptions::new().create(true).append(true).open(path)?;
                for (key, row) in &entries {
                    let line = serde_json::to_string(&Entry {
                        key: key.clone(),
                        row: row.clone(),
                    })?;
                    writeln!(file, "{line}")?;
                }
            }
        }
        self.rows.extend(entries);
        Ok(())
    }
}
