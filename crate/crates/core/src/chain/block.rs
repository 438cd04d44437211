//! Blocks, receipts and the per-block execution context.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::hash::{sha256_concat, Hash32};
use crate::merkle::merkle_root;
use crate::types::{Address, LogRecord, StateCommitment, Transaction};
use crate::vm::ExecStatus;
use crate::word::Word256;

/// What executing code can see of the chain: current block number and
/// timestamp plus the hashes of the last 256 blocks.
#[derive(Clone, Debug, Default)]
pub struct BlockContext {
    pub number: u64,
    pub timestamp: u64,
    pub parent_hash: Hash32,
    pub recent_hashes: BTreeMap<u64, Hash32>,
}

impl BlockContext {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Hash of block `n` as a word; zero outside the 256-block window or for
    /// the current and future blocks.
    pub fn blockhash(&self, n: u64) -> Word256 {
        if n >= self.number || self.number - n > 256 {
            return Word256::ZERO;
        }
        self.recent_hashes
            .get(&n)
            .map(|h| Word256::from_be_bytes(h.0))
            .unwrap_or(Word256::ZERO)
    }
}

/// A mined block. `hash` covers the header (including the PoW nonce) and has
/// at least `difficulty_bits` leading zero bits.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Block {
    #[serde(with = "crate::serde_util::u64_string")]
    pub number: u64,
    #[serde(with = "crate::serde_util::u64_string")]
    pub timestamp: u64,
    pub parent_hash: Hash32,
    pub state_root: StateCommitment,
    /// Fee recipient; replay needs it to reproduce balances.
    pub miner: Address,
    pub transactions: Vec<Transaction>,
    #[serde(with = "crate::serde_util::u64_string")]
    pub nonce: u64,
    #[serde(with = "crate::serde_util::u32_string")]
    pub difficulty_bits: u32,
    pub hash: Hash32,
}

impl Block {
    /// Commitment to the transaction list: a Merkle root over tx hashes.
    pub fn tx_root(transactions: &[Transaction]) -> Hash32 {
        let leaves: Vec<Hash32> = transactions.iter().map(|tx| tx.hash()).collect();
        merkle_root(&leaves)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn header_hash(
        number: u64,
        timestamp: u64,
        parent_hash: &Hash32,
        state_root: &StateCommitment,
        miner: &Address,
        tx_root: &Hash32,
        difficulty_bits: u32,
        nonce: u64,
    ) -> Hash32 {
        sha256_concat(&[
            &number.to_be_bytes(),
            &timestamp.to_be_bytes(),
            parent_hash.as_bytes(),
            state_root.0.as_bytes(),
            miner.as_bytes(),
            tx_root.as_bytes(),
            &difficulty_bits.to_be_bytes(),
            &nonce.to_be_bytes(),
        ])
    }

    /// Recomputes this block's header hash from its fields.
    pub fn computed_hash(&self) -> Hash32 {
        Self::header_hash(
            self.number,
            self.timestamp,
            &self.parent_hash,
            &self.state_root,
            &self.miner,
            &Self::tx_root(&self.transactions),
            self.difficulty_bits,
            self.nonce,
        )
    }
}

/// Outcome of one included transaction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Receipt {
    pub tx_hash: Hash32,
    pub status: ExecStatus,
    #[serde(with = "crate::serde_util::u64_string")]
    pub gas_used: u64,
    pub contract_address: Option<Address>,
    pub logs: Vec<LogRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blockhash_window() {
        let mut ctx = BlockContext {
            number: 400,
            timestamp: 400,
            parent_hash: Hash32([9; 32]),
            recent_hashes: BTreeMap::new(),
        };
        for n in 144..400u64 {
            ctx.recent_hashes.insert(n, Hash32([n as u8; 32]));
        }
        // Parent is visible.
        assert_eq!(
            ctx.blockhash(399),
            Word256::from_be_bytes([399u64 as u8; 32])
        );
        // Current block and anything 257+ back read as zero.
        assert_eq!(ctx.blockhash(400), Word256::ZERO);
        assert_eq!(ctx.blockhash(100), Word256::ZERO);
        assert_eq!(ctx.blockhash(143), Word256::ZERO);
        assert_ne!(ctx.blockhash(144), Word256::ZERO);
    }

    #[test]
    fn header_hash_depends_on_every_field() {
        let root = StateCommitment(Hash32([1; 32]));
        let txr = Hash32([2; 32]);
        let m = Address([3; 20]);
        let base = Block::header_hash(1, 2, &Hash32::ZERO, &root, &m, &txr, 4, 5);
        assert_ne!(base, Block::header_hash(2, 2, &Hash32::ZERO, &root, &m, &txr, 4, 5));
        assert_ne!(base, Block::header_hash(1, 3, &Hash32::ZERO, &root, &m, &txr, 4, 5));
        assert_ne!(base, Block::header_hash(1, 2, &Hash32::ZERO, &root, &m, &txr, 4, 6));
        let m2 = Address([4; 20]);
        assert_ne!(base, Block::header_hash(1, 2, &Hash32::ZERO, &root, &m2, &txr, 4, 5));
    }
}
