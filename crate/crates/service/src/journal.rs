//! Append-only JSON-lines journal, the source of truth for the store.
//!
//! Each entry is one line terminated by `\n` and flushed to disk before the
//! write is acknowledged. On open, a trailing line without its newline (or
//! that fails to parse) is treated as a torn write: it is dropped and the
//! file is truncated back to the last complete entry. A malformed line
//! anywhere else is corruption and fails the open.

use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

/// Timestamps are kept as RFC 3339 strings so replay sees the exact value
/// that was stamped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum JournalEntry {
    Submit {
        at: String,
        request_id: String,
        actor: String,
        notice_id: String,
        /// The policy document exactly as submitted.
        policy: String,
    },
    Decision {
        at: String,
        request_id: String,
        action: String,
        actor: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        justification: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        outcome: Option<bool>,
        notice_id: String,
    },
    Clock {
        at: String,
    },
}

impl JournalEntry {
    pub fn at(&self) -> &str {
        match self {
            JournalEntry::Submit { at, .. } | JournalEntry::Decision { at, .. } | JournalEntry::Clock { at } => at,
        }
    }
}

pub struct Journal {
    path: PathBuf,
    file: File,
}

impl Journal {
    /// Open (creating if needed) and return the intact entries.
    pub fn open(path: &Path) -> anyhow::Result<(Journal, Vec<JournalEntry>)> {
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(path)
            .with_context(|| format!("opening journal {}", path.display()))?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;

        let mut entries = Vec::new();
        let mut good_len = 0usize;
        let mut offset = 0usize;
        while offset < bytes.len() {
            let rest = &bytes[offset..];
            let Some(nl) = rest.iter().position(|&b| b == b'\n') else {
                tracing::warn!(bytes = rest.len(), "dropping torn journal tail");
                break;
            };
            let line = &rest[..nl];
            let is_last = offset + nl + 1 == bytes.len();
            match serde_json::from_slice::<JournalEntry>(line) {
                Ok(entry) => entries.push(entry),
                Err(e) if is_last => {
                    tracing::warn!(error = %e, "dropping unparsable final journal line");
                    break;
                }
                Err(e) => bail!("journal {} corrupt at byte {offset}: {e}", path.display()),
            }
            offset += nl + 1;
            good_len = offset;
        }
        if good_len < bytes.len() {
            file.set_len(good_len as u64)?;
            file.seek(SeekFrom::End(0))?;
        }
        Ok((
            Journal {
                path: path.to_path_buf(),
                file,
            },
            entries,
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Append one entry and sync it.
    pub fn append(&mut self, entry: &JournalEntry) -> anyhow::Result<()> {
        let mut line = serde_json::to_vec(entry)?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.sync_data()?;
        Ok(())
    }
}
