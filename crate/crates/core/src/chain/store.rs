//! On-disk chain format: one JSON document holding the genesis allocation,
//! every mined block with its receipts, and the pending mempool. Loading
//! replays the chain from genesis and verifies each stored state root.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::types::{Account, Address, Transaction};

use super::block::{Block, Receipt};
use super::ChainConfig;

pub const CHAIN_DOC_VERSION: &str = "v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StoredBlock {
    #[serde(flatten)]
    pub block: Block,
    pub receipts: Vec<Receipt>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainDocument {
    pub version: String,
    pub config: ChainConfig,
    pub genesis: BTreeMap<Address, Account>,
    pub blocks: Vec<StoredBlock>,
    #[serde(default)]
    pub mempool: Vec<Transaction>,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed chain file {path}: {source}")]
    Format {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("unsupported chain file version {0}")]
    Version(String),
    #[error("chain file {0} is locked by another process (remove the .lock file if stale)")]
    Locked(PathBuf),
}

fn io_err(path: &Path, source: std::io::Error) -> StoreError {
    StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl ChainDocument {
    /// Writes atomically: a temp file in the same directory, then rename.
    pub fn save(&self, path: &Path) -> Result<(), StoreError> {
        let json = serde_json::to_string_pretty(self).expect("chain document serializes");
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, json).map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| io_err(path, e))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, StoreError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let doc: ChainDocument = serde_json::from_str(&text).map_err(|e| StoreError::Format {
            path: path.to_path_buf(),
            source: e,
        })?;
        if doc.version != CHAIN_DOC_VERSION {
            return Err(StoreError::Version(doc.version));
        }
        Ok(doc)
    }
}

/// Single-writer guard: `<chain>.lock` is created exclusively and removed on
/// drop.
pub struct ChainLock {
    path: PathBuf,
}

impl ChainLock {
    pub fn acquire(chain_path: &Path) -> Result<ChainLock, StoreError> {
        let mut os = chain_path.as_os_str().to_os_string();
        os.push(".lock");
        let path = PathBuf::from(os);
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(ChainLock { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(StoreError::Locked(chain_path.to_path_buf()))
            }
            Err(e) => Err(io_err(&path, e)),
        }
    }
}

impl Drop for ChainLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}
