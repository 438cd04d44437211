//! Binary Merkle commitment over world state.
//!
//! Account leaf: `H(address || nonce_be8 || balance_be32 || storage_root || H(code))`.
//! Storage root: binary Merkle root over `H(key_be32 || value_be32)` leaves
//! sorted by key. Trees duplicate the last node at odd levels; the root of an
//! empty leaf set is `H(0x00)`. Accounts indistinguishable from absent ones
//! are skipped so equal states commit to equal roots.

use serde::{Deserialize, Serialize};

use crate::hash::{sha256, sha256_concat, Hash32};
use crate::types::{Account, Address, StateCommitment, WorldState};

/// Root of a binary Merkle tree; empty input hashes a single 0x00 marker byte.
pub fn merkle_root(leaves: &[Hash32]) -> Hash32 {
    if leaves.is_empty() {
        return sha256(&[0u8]);
    }
    let mut level: Vec<Hash32> = leaves.to_vec();
    while level.len() > 1 {
        if level.len() % 2 == 1 {
            level.push(*level.last().unwrap());
        }
        level = level
            .chunks(2)
            .map(|pair| sha256_concat(&[pair[0].as_bytes(), pair[1].as_bytes()]))
            .collect();
    }
    level[0]
}

pub fn storage_root(account: &Account) -> Hash32 {
    let leaves: Vec<Hash32> = account
        .storage
        .iter()
        .map(|(k, v)| sha256_concat(&[&k.to_be_bytes(), &v.to_be_bytes()]))
        .collect();
    merkle_root(&leaves)
}

pub fn account_leaf(addr: &Address, account: &Account) -> Hash32 {
    sha256_concat(&[
        addr.as_bytes(),
        &account.nonce.to_be_bytes(),
        &account.balance.to_be_bytes(),
        storage_root(account).as_bytes(),
        sha256(&account.code).as_bytes(),
    ])
}

fn sorted_leaves(state: &WorldState) -> Vec<(Address, Hash32)> {
    state
        .accounts
        .iter()
        .filter(|(_, acct)| !acct.is_empty())
        .map(|(addr, acct)| (*addr, account_leaf(addr, acct)))
        .collect()
}

/// Deterministic commitment to the full world state.
pub fn state_root(state: &WorldState) -> StateCommitment {
    let leaves: Vec<Hash32> = sorted_leaves(state).into_iter().map(|(_, h)| h).collect();
    StateCommitment(merkle_root(&leaves))
}

/// Path from an account leaf to the root: the leaf index plus one sibling
/// hash per level. A lone node at the end of an odd level is its own sibling.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MembershipProof {
    pub index: u64,
    pub siblings: Vec<Hash32>,
}

/// Builds a proof for `addr`; `None` when the account is absent or empty.
pub fn prove_membership(state: &WorldState, addr: &Address) -> Option<MembershipProof> {
    let leaves = sorted_leaves(state);
    let index = leaves.iter().position(|(a, _)| a == addr)?;
    let mut level: Vec<Hash32> = leaves.into_iter().map(|(_, h)| h).collect();
    let mut siblings = Vec::new();
    let mut i = index;
    while level.len() > 1 {
        if level.len() % 2 == 1 {
            level.push(*level.last().unwrap());
        }
        siblings.push(level[i ^ 1]);
        level = level
            .chunks(2)
            .map(|pair| sha256_concat(&[pair[0].as_bytes(), pair[1].as_bytes()]))
            .collect();
        i /= 2;
    }
    Some(MembershipProof {
        index: index as u64,
        siblings,
    })
}

/// True iff folding the claimed account leaf with the proof's siblings
/// reproduces the root. Malformed proofs simply fail to reproduce it.
pub fn verify_membership(
    root: &StateCommitment,
    addr: &Address,
    account: &Account,
    proof: &MembershipProof,
) -> bool {
    let mut hash = account_leaf(addr, account);
    let mut index = proof.index;
    for sibling in &proof.siblings {
        hash = if index % 2 == 1 {
            sha256_concat(&[sibling.as_bytes(), hash.as_bytes()])
        } else {
            sha256_concat(&[hash.as_bytes(), sibling.as_bytes()])
        };
        index /= 2;
    }
    hash == root.0
}
