//! Toy proof of work: find a nonce whose header hash starts with the
//! required number of zero bits.

use crate::hash::Hash32;
use crate::types::{Address, StateCommitment, Transaction};

use super::block::Block;

pub fn leading_zero_bits(hash: &Hash32) -> u32 {
    let mut zeros = 0;
    for byte in hash.0 {
        if byte == 0 {
            zeros += 8;
        } else {
            zeros += byte.leading_zeros();
            break;
        }
    }
    zeros
}

/// Sequential nonce search from `start_nonce`. With difficulty `d` this
/// takes ~2^d attempts; tests use small values.
#[allow(clippy::too_many_arguments)]
pub fn mine(
    number: u64,
    timestamp: u64,
    parent_hash: &Hash32,
    state_root: &StateCommitment,
    miner: &Address,
    transactions: &[Transaction],
    difficulty_bits: u32,
    start_nonce: u64,
) -> (u64, Hash32) {
    let tx_root = Block::tx_root(transactions);
    let mut nonce = start_nonce;
    loop {
        let hash = Block::header_hash(
            number,
            timestamp,
            parent_hash,
            state_root,
            miner,
            &tx_root,
            difficulty_bits,
            nonce,
        );
        if leading_zero_bits(&hash) >= difficulty_bits {
            return (nonce, hash);
        }
        nonce = nonce.wrapping_add(1);
    }
}
