//! Like/dislike counters per shape fingerprint, persisted as one JSON file.
//!
//! File layout: `{"formatVersion": 1, "entries": {"<fingerprint>": {"likes": n, "dislikes": n}}}`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arpeggio::Fingerprint;
use crate::FORMAT_VERSION;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Votes {
    pub likes: u64,
    pub dislikes: u64,
}

impl Votes {
    /// Dislikes minus likes.
    pub fn net_penalty(&self) -> f64 {
        self.dislikes as f64 - self.likes as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Like,
    Dislike,
}

/// Open-world vote table: an absent fingerprint has zero votes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PreferenceStore {
    format_version: u32,
    entries: BTreeMap<Fingerprint, Votes>,
}

impl PreferenceStore {
    pub fn new() -> Self {
        PreferenceStore { format_version: FORMAT_VERSION, entries: BTreeMap::new() }
    }

    pub fn votes(&self, fingerprint: &Fingerprint) -> Votes {
        self.entries.get(fingerprint).copied().unwrap_or_default()
    }

    pub fn record(&mut self, fingerprint: Fingerprint, verdict: Verdict) -> Votes {
        let votes = self.entries.entry(fingerprint).or_default();
        match verdict {
            Verdict::Like => votes.likes += 1,
            Verdict::Dislike => votes.dislikes += 1,
        }
        *votes
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        let text = fs::read_to_string(path)?;
        let store: PreferenceStore =
            serde_json::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        if store.format_version != FORMAT_VERSION {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("unsupported preference file version {}", store.format_version),
            ));
        }
        Ok(store)
    }

    /// Like [`load`](Self::load), but a missing file is an empty store.
    pub fn load_or_default(path: &Path) -> io::Result<Self> {
        match Self::load(path) {
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Self::new()),
            other => other,
        }
    }

    /// Writes to a sibling temp file, then renames it over `path`.
    pub fn save(&self, path: &Path) -> io::Result<()> {
        let json = serde_json::to_vec_pretty(self).map_err(io::Error::other)?;
        let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
        tmp_name.push(".tmp");
        let tmp = path.with_file_name(tmp_name);
        {
            let mut file = fs::File::create(&tmp)?;
            file.write_all(&json)?;
            file.write_all(b"\n")?;
            file.sync_all()?;
        }
        fs::rename(&tmp, path)
    }
}
