//! Chain lifecycle: mempool, block production with toy proof of work,
//! transaction execution and persistence.

pub mod block;
pub mod mempool;
pub mod pow;
pub mod store;
pub mod txexec;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::hash::Hash32;
use crate::merkle::state_root;
use crate::types::{Account, Address, StateCommitment, Transaction, WorldState};
use crate::vm::{self, ExecOutcome, TraceEvent};
use crate::word::Word256;

pub use block::{Block, BlockContext, Receipt};
pub use mempool::Mempool;
pub use store::{ChainDocument, ChainLock, StoreError, StoredBlock};
pub use txexec::{apply_transaction, derive_address, TxError};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainConfig {
    #[serde(with = "crate::serde_util::u32_string")]
    pub difficulty_bits: u32,
    /// Sequential nonce search from zero and synthetic timestamps, so runs
    /// replay bit-exactly.
    pub deterministic: bool,
    /// Paid to the miner per block on top of fees; zero keeps conservation
    /// exact.
    pub block_reward: Word256,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            difficulty_bits: 8,
            deterministic: true,
            block_reward: Word256::ZERO,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ChainError {
    #[error(transparent)]
    Tx(#[from] TxError),
    #[error(transparent)]
    DuplicatePending(#[from] mempool::DuplicatePending),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("replay mismatch at block {number}: stored root {stored}, recomputed {computed}")]
    ReplayRootMismatch {
        number: u64,
        stored: StateCommitment,
        computed: StateCommitment,
    },
    #[error("replay mismatch at block {number}: header hash does not match contents")]
    ReplayHashMismatch { number: u64 },
    #[error("block {number} replay: transaction rejected: {source}")]
    ReplayTx { number: u64, source: TxError },
}

/// The single-writer chain state machine.
pub struct Chain {
    pub config: ChainConfig,
    pub genesis_accounts: BTreeMap<Address, Account>,
    pub blocks: Vec<StoredBlock>,
    pub mempool: Mempool,
    pub state: WorldState,
    /// Traces of every executed transaction in this process, by tx hash.
    /// Not persisted; feeds the dynamic detector and trace export.
    pub traces: BTreeMap<Hash32, Vec<TraceEvent>>,
}

impl Chain {
    /// Fresh chain: the genesis block commits the initial allocation.
    pub fn new(genesis_accounts: BTreeMap<Address, Account>, config: ChainConfig) -> Chain {
        let state = WorldState {
            accounts: genesis_accounts.clone(),
        };
        let root = state_root(&state);
        let timestamp = if config.deterministic { 0 } else { now_secs() };
        let hash = Block::header_hash(
            0,
            timestamp,
            &Hash32::ZERO,
            &root,
            &Address::ZERO,
            &Block::tx_root(&[]),
            0,
            0,
        );
        let genesis = Block {
            number: 0,
            timestamp,
            parent_hash: Hash32::ZERO,
            state_root: root,
            miner: Address::ZERO,
            transactions: vec![],
            nonce: 0,
            difficulty_bits: 0,
            hash,
        };
        Chain {
            config,
            genesis_accounts,
            blocks: vec![StoredBlock {
                block: genesis,
                receipts: vec![],
            }],
            mempool: Mempool::default(),
            state,
            traces: BTreeMap::new(),
        }
    }

    pub fn head(&self) -> &Block {
        &self.blocks.last().expect("genesis always present").block
    }

    pub fn block(&self, number: u64) -> Option<&StoredBlock> {
        self.blocks.get(number as usize)
    }

    pub fn queue(&mut self, tx: Transaction) -> Result<Hash32, ChainError> {
        let hash = tx.hash();
        self.mempool.insert(tx)?;
        Ok(hash)
    }

    /// Execution context for transactions of the block being built on top of
    /// the current head.
    pub fn next_context(&self) -> BlockContext {
        let head = self.head();
        let number = head.number + 1;
        let timestamp = if self.config.deterministic {
            head.timestamp + 1
        } else {
            now_secs().max(head.timestamp + 1)
        };
        let mut recent_hashes = BTreeMap::new();
        for stored in self.blocks.iter().rev().take(256) {
            recent_hashes.insert(stored.block.number, stored.block.hash);
        }
        BlockContext {
            number,
            timestamp,
            parent_hash: head.hash,
            recent_hashes,
        }
    }

    /// Drains the mempool in miner order, executes against a working copy,
    /// mines the PoW nonce and appends the block. Transactions that fail
    /// validation are dropped and reported back.
    pub fn build_block(&mut self, miner: Address) -> Result<BlockSummary, ChainError> {
        let ctx = self.next_context();
        let mut working = self.state.clone();
        let mut receipts = Vec::new();
        let mut included = Vec::new();
        let mut rejected = Vec::new();
        let mut traces = Vec::new();

        for tx in self.mempool.drain_ordered() {
            match apply_transaction(&mut working, &tx, &ctx, &miner) {
                Ok((receipt, trace)) => {
                    traces.push((receipt.tx_hash, trace));
                    receipts.push(receipt);
                    included.push(tx);
                }
                Err(err) => rejected.push((tx, err)),
            }
        }

        if !self.config.block_reward.is_zero() {
            let account = working.account_mut(miner);
            account.balance = account.balance.wrapping_add(self.config.block_reward);
        }

        let root = state_root(&working);
        let start_nonce = if self.config.deterministic {
            0
        } else {
            rand::random::<u64>()
        };
        let (nonce, hash) = pow::mine(
            ctx.number,
            ctx.timestamp,
            &ctx.parent_hash,
            &root,
            &miner,
            &included,
            self.config.difficulty_bits,
            start_nonce,
        );
        let block = Block {
            number: ctx.number,
            timestamp: ctx.timestamp,
            parent_hash: ctx.parent_hash,
            state_root: root,
            miner,
            transactions: included,
            nonce,
            difficulty_bits: self.config.difficulty_bits,
            hash,
        };
        self.state = working;
        for (tx_hash, trace) in traces {
            self.traces.insert(tx_hash, trace);
        }
        self.blocks.push(StoredBlock {
            block,
            receipts,
        });
        Ok(BlockSummary {
            number: ctx.number,
            hash,
            rejected,
        })
    }

    /// Read-only call against a scratch copy of the current state; nothing
    /// is mined or persisted. Used by result decoders and inspection.
    pub fn view_call(
        &self,
        from: Address,
        to: Address,
        call_data: Vec<u8>,
        gas: u64,
    ) -> ExecOutcome {
        let mut scratch = self.state.clone();
        let ctx = self.next_context();
        vm::execute_message(&mut scratch, &ctx, from, to, Word256::ZERO, call_data, gas)
    }

    pub fn receipt(&self, tx_hash: &Hash32) -> Option<&Receipt> {
        self.blocks
            .iter()
            .flat_map(|b| b.receipts.iter())
            .find(|r| &r.tx_hash == tx_hash)
    }

    pub fn trace(&self, tx_hash: &Hash32) -> Option<&[TraceEvent]> {
        self.traces.get(tx_hash).map(|t| t.as_slice())
    }

    pub fn to_document(&self) -> ChainDocument {
        ChainDocument {
            version: store::CHAIN_DOC_VERSION.to_string(),
            config: self.config.clone(),
            genesis: self.genesis_accounts.clone(),
            blocks: self.blocks[1..].to_vec(),
            mempool: self.mempool.iter().cloned().collect(),
        }
    }

    /// Rebuilds a chain by re-executing every stored block from genesis.
    /// Stored roots and header hashes must reproduce bit-exactly.
    pub fn from_document(doc: ChainDocument) -> Result<Chain, ChainError> {
        let mut chain = Chain::new(doc.genesis, doc.config);
        for stored in doc.blocks {
            let number = stored.block.number;
            let mut ctx = chain.next_context();
            // Replay honors the stored timestamp (non-deterministic chains
            // carry wall-clock values).
            ctx.timestamp = stored.block.timestamp;
            let mut working = chain.state.clone();
            let miner = stored.block.miner;
            let mut receipts = Vec::new();
            for tx in &stored.block.transactions {
                let (receipt, trace) = apply_transaction(&mut working, tx, &ctx, &miner)
                    .map_err(|source| ChainError::ReplayTx { number, source })?;
                chain.traces.insert(receipt.tx_hash, trace);
                receipts.push(receipt);
            }
            if !chain.config.block_reward.is_zero() {
                let account = working.account_mut(miner);
                account.balance = account.balance.wrapping_add(chain.config.block_reward);
            }
            let computed = state_root(&working);
            if computed != stored.block.state_root {
                return Err(ChainError::ReplayRootMismatch {
                    number,
                    stored: stored.block.state_root,
                    computed,
                });
            }
            if stored.block.computed_hash() != stored.block.hash {
                return Err(ChainError::ReplayHashMismatch { number });
            }
            chain.state = working;
            chain.blocks.push(StoredBlock {
                block: stored.block,
                receipts,
            });
        }
        for tx in doc.mempool {
            chain.mempool.insert(tx).map_err(ChainError::from)?;
        }
        Ok(chain)
    }

    pub fn save(&self, path: &Path) -> Result<(), ChainError> {
        Ok(self.to_document().save(path)?)
    }

    pub fn load(path: &Path) -> Result<Chain, ChainError> {
        Chain::from_document(ChainDocument::load(path)?)
    }
}

/// Result of building one block.
#[derive(Debug)]
pub struct BlockSummary {
    pub number: u64,
    pub hash: Hash32,
    pub rejected: Vec<(Transaction, TxError)>,
}

fn now_secs() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
