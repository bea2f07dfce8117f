//! Append-only newline-delimited JSON journal.
//!
//! Every mutation of the store is one line. On open the whole file is
//! replayed; a torn final line (crash mid-append) is cut off, anything else
//! that fails to decode is reported as corruption.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use fortress_core::EntityClass;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StoreError};
use crate::record::{FortressRecord, UserAccount};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Entry {
    Fortress(FortressRecord),
    Play {
        id: u64,
        play_count: u64,
    },
    User(UserAccount),
    Backpack {
        username: String,
        backpack: Vec<EntityClass>,
    },
}

pub struct Journal {
    path: PathBuf,
    file: File,
}

impl Journal {
    /// Opens (creating if needed) and replays the journal at `path`.
    pub fn open(path: impl AsRef<Path>) -> Result<(Journal, Vec<Entry>)> {
        let path = path.as_ref().to_path_buf();
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .open(&path)?;

        let mut entries = Vec::new();
        let mut good_len = 0u64;
        let mut torn: Option<(usize, String)> = None;
        {
            let mut reader = BufReader::new(&file);
            let mut buf = String::new();
            let mut line_no = 0;
            loop {
                buf.clear();
                let n = reader.read_line(&mut buf)?;
                if n == 0 {
                    break;
                }
                line_no += 1;
                if let Some((line, message)) = torn.take() {
                    return Err(StoreError::Corrupt { line, message });
                }
                let complete = buf.ends_with('\n');
                let text = buf.trim_end();
                if text.is_empty() {
                    good_len += n as u64;
                    continue;
                }
                match serde_json::from_str::<Entry>(text) {
                    Ok(entry) if complete => {
                        entries.push(entry);
                        good_len += n as u64;
                    }
                    Ok(_) => torn = Some((line_no, "missing line terminator".into())),
                    Err(e) => torn = Some((line_no, e.to_string())),
                }
            }
        }
        if let Some((line, message)) = torn {
            tracing::warn!(line, %message, "dropping torn journal tail");
            file.set_len(good_len)?;
            file.seek(SeekFrom::End(0))?;
        }
        Ok((Journal { path, file }, entries))
    }

    pub fn append(&mut self, entry: &Entry) -> Result<()> {
        let mut line =
            serde_json::to_string(entry).map_err(|e| StoreError::InvalidInput(e.to_string()))?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()?;
        self.file.sync_data()?;
        Ok(())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}
