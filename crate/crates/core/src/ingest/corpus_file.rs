use std::fs;
use std::io::Write;
use std::path::Path;

use super::PatentRecord;
use crate::{Error, Result};

/// First eight bytes of every corpus file.
pub const CORPUS_MAGIC: &[u8; 8] = b"PATLASC\0";
pub const CORPUS_VERSION: u32 = 1;

/// Corpus layout: magic, little-endian `u32` version, little-endian `u64`
/// payload length, then the merged records as compact JSON.
pub fn write_corpus(path: &Path, records: &[PatentRecord]) -> Result<()> {
    let payload = serde_json::to_vec(records)?;
    let mut buf = Vec::with_capacity(payload.len() + 20);
    buf.extend_from_slice(CORPUS_MAGIC);
    buf.extend_from_slice(&CORPUS_VERSION.to_le_bytes());
    buf.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    buf.extend_from_slice(&payload);
    let mut f = crate::fsutil::create_file(path)?;
    f.write_all(&buf).map_err(|e| Error::io(path, e))
}

pub fn read_corpus(path: &Path) -> Result<Vec<PatentRecord>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

fn decode(bytes: &[u8]) -> Result<Vec<PatentRecord>> {
    if bytes.len() < 20 || &bytes[..8] != CORPUS_MAGIC {
        return Err(Error::CorpusFormat("missing magic header".into()));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != CORPUS_VERSION {
        return Err(Error::CorpusFormat(format!(
            "unsupported version {version}"
        )));
    }
    let len = u64::from_le_bytes(bytes[12..20].try_into().unwrap()) as usize;
    if bytes.len() - 20 != len {
        return Err(Error::CorpusFormat("truncated payload".into()));
    }
    Ok(serde_json::from_slice(&bytes[20..])?)
}
