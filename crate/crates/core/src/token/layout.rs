//! Token storage layout: slot 0 holds the total supply, balances live at
//! H(0x01 || holder), allowances at H(0x02 || owner || spender).

use crate::hash::sha256_concat;
use crate::types::{Address, WorldState};
use crate::word::Word256;

pub const TOTAL_SUPPLY_SLOT: Word256 = Word256::ZERO;

const BALANCE_DOMAIN: u8 = 0x01;
const ALLOWANCE_DOMAIN: u8 = 0x02;

pub fn balance_slot(holder: &Address) -> Word256 {
    let h = sha256_concat(&[&[BALANCE_DOMAIN], holder.as_bytes()]);
    Word256::from_be_bytes(h.0)
}

pub fn allowance_slot(owner: &Address, spender: &Address) -> Word256 {
    let h = sha256_concat(&[&[ALLOWANCE_DOMAIN], owner.as_bytes(), spender.as_bytes()]);
    Word256::from_be_bytes(h.0)
}

pub fn total_supply(state: &WorldState, token: &Address) -> Word256 {
    state.storage(token, &TOTAL_SUPPLY_SLOT)
}

pub fn balance_of(state: &WorldState, token: &Address, holder: &Address) -> Word256 {
    state.storage(token, &balance_slot(holder))
}

pub fn allowance_of(
    state: &WorldState,
    token: &Address,
    owner: &Address,
    spender: &Address,
) -> Word256 {
    state.storage(token, &allowance_slot(owner, spender))
}

/// Holder/balance pairs among `candidates` (typically every account in the
/// world state), nonzero balances only, sorted by address.
pub fn holders<'a>(
    state: &WorldState,
    token: &Address,
    candidates: impl Iterator<Item = &'a Address>,
) -> Vec<(Address, Word256)> {
    let mut out = Vec::new();
    for addr in candidates {
        let balance = balance_of(state, token, addr);
        if !balance.is_zero() {
            out.push((*addr, balance));
        }
    }
    out.sort_by_key(|(a, _)| *a);
    out
}
