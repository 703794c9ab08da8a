//! Append-only log of store mutations.
//!
//! Each record is one line: eight hex digits of CRC-32 over the payload, a
//! space, the JSON payload and `\n`. A batch is a single record, so after a
//! crash a batch is either fully present or absent. A torn record at the
//! tail is cut off when the log is reopened.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub(crate) enum LogRecord {
    Put(Vec<Value>),
    Purge(String),
}

#[derive(Debug)]
pub(crate) struct Wal {
    path: PathBuf,
    file: File,
    len: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum WalError {
    #[error("log I/O on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("log {path} is corrupt at byte {offset}")]
    Corrupt { path: PathBuf, offset: u64 },
}

impl Wal {
    /// Opens (creating if needed) the log and replays every intact record.
    pub(crate) fn open(
        path: &Path,
        mut apply: impl FnMut(LogRecord),
    ) -> Result<Self, WalError> {
        let io_err = |source| WalError::Io {
            path: path.to_owned(),
            source,
        };
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(path)
            .map_err(io_err)?;
        let total = file.metadata().map_err(io_err)?.len();

        let mut reader = BufReader::with_capacity(1 << 20, &mut file);
        let mut good = 0u64;
        let mut line = Vec::new();
        loop {
            line.clear();
            let n = reader.read_until(b'\n', &mut line).map_err(io_err)?;
            if n == 0 {
                break;
            }
            match decode(&line) {
                Some(record) => {
                    apply(record);
                    good += n as u64;
                }
                None if good + n as u64 == total => break,
                None => {
                    return Err(WalError::Corrupt {
                        path: path.to_owned(),
                        offset: good,
                    })
                }
            }
        }
        drop(reader);
        if good < total {
            tracing::warn!(path = %path.display(), dropped = total - good, "discarding torn log tail");
            file.set_len(good).map_err(io_err)?;
            file.sync_all().map_err(io_err)?;
        }
        file.seek(SeekFrom::End(0)).map_err(io_err)?;
        Ok(Wal {
            path: path.to_owned(),
            file,
            len: good,
        })
    }

    /// Appends one record and syncs it. On failure the log is cut back to
    /// its previous length.
    pub(crate) fn append(&mut self, record: &LogRecord) -> Result<(), WalError> {
        let bytes = encode(record);
        let result = self
            .file
            .write_all(&bytes)
            .and_then(|()| self.file.sync_data());
        match result {
            Ok(()) => {
                self.len += bytes.len() as u64;
                Ok(())
            }
            Err(source) => {
                let _ = self.file.set_len(self.len);
                Err(WalError::Io {
                    path: self.path.clone(),
                    source,
                })
            }
        }
    }
}

pub(crate) fn encode(record: &LogRecord) -> Vec<u8> {
    let payload = serde_json::to_vec(record).expect("log records serialize");
    let crc = crc32fast::hash(&payload);
    let mut out = Vec::with_capacity(payload.len() + 10);
    out.extend_from_slice(format!("{crc:08x} ").as_bytes());
    out.extend_from_slice(&payload);
    out.push(b'\n');
    out
}

fn decode(line: &[u8]) -> Option<LogRecord> {
    let body = line.strip_suffix(b"\n")?;
    if body.len() < 9 || body[8] != b' ' {
        return None;
    }
    let crc = u32::from_str_radix(std::str::from_utf8(&body[..8]).ok()?, 16).ok()?;
    let payload = &body[9..];
    if crc32fast::hash(payload) != crc {
        return None;
    }
    serde_json::from_slice(payload).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn replay(path: &Path) -> Result<Vec<usize>, WalError> {
        let mut sizes = Vec::new();
        Wal::open(path, |r| {
            if let LogRecord::Put(docs) = r {
                sizes.push(docs.len())
            }
        })?;
        Ok(sizes)
    }

    #[test]
    fn records_survive_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log");
        let mut wal = Wal::open(&path, |_| {}).unwrap();
        wal.append(&LogRecord::Put(vec![json!({"id": "a"})])).unwrap();
        wal.append(&LogRecord::Purge("r".into())).unwrap();
        drop(wal);
        assert_eq!(replay(&path).unwrap(), vec![1]);
    }

    #[test]
    fn corruption_before_the_tail_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log");
        let mut wal = Wal::open(&path, |_| {}).unwrap();
        wal.append(&LogRecord::Put(vec![json!({"id": "a"})])).unwrap();
        wal.append(&LogRecord::Put(vec![json!({"id": "b"})])).unwrap();
        drop(wal);
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[12] ^= 0x20;
        std::fs::write(&path, bytes).unwrap();
        assert!(matches!(replay(&path), Err(WalError::Corrupt { offset: 0, .. })));
    }
}
