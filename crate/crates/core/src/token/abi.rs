//! Call encoding: a 4-byte selector (first four bytes of H(signature))
//! followed by 32-byte argument words.
//!
//! The VM has no hash instruction, so contracts cannot derive mapping slots
//! like H(0x01 || holder) at runtime. Token encoders therefore append the
//! host-computed slot words after the declared arguments; the contract reads
//! them from call data. A dishonest encoder can desynchronize a token's own
//! bookkeeping, which is outside this lab's threat model.

use crate::hash::{sha256, Hash32};
use crate::types::Address;
use crate::word::Word256;

use super::layout::{allowance_slot, balance_slot};

/// Signature text used for the Transfer event, hashed with the repository
/// hash wherever a topic constant is needed.
pub const TRANSFER_EVENT_SIGNATURE: &str = "Transfer(address,address,uint256)";

pub fn selector(signature: &str) -> [u8; 4] {
    let h = sha256(signature.as_bytes());
    [h.0[0], h.0[1], h.0[2], h.0[3]]
}

pub fn transfer_event_topic() -> Hash32 {
    sha256(TRANSFER_EVENT_SIGNATURE.as_bytes())
}

/// A function selector plus word-encoded arguments.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbiCall {
    pub selector: [u8; 4],
    pub args: Vec<Word256>,
}

impl AbiCall {
    pub fn new(signature: &str, args: Vec<Word256>) -> AbiCall {
        AbiCall {
            selector: selector(signature),
            args,
        }
    }

    /// Encoded length is exactly 4 + 32 * argCount.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 32 * self.args.len());
        out.extend_from_slice(&self.selector);
        for arg in &self.args {
            out.extend_from_slice(&arg.to_be_bytes());
        }
        out
    }
}

/// First 32 bytes of return data as a word.
pub fn decode_word(return_data: &[u8]) -> Option<Word256> {
    if return_data.len() < 32 {
        return None;
    }
    let mut buf = [0u8; 32];
    buf.copy_from_slice(&return_data[..32]);
    Some(Word256::from_be_bytes(buf))
}

pub fn total_supply_call() -> AbiCall {
    AbiCall::new("totalSupply()", vec![])
}

pub fn balance_of_call(holder: &Address) -> AbiCall {
    AbiCall::new(
        "balanceOf(address)",
        vec![holder.to_word(), balance_slot(holder)],
    )
}

pub fn transfer_call(caller: &Address, to: &Address, amount: Word256) -> AbiCall {
    AbiCall::new(
        "transfer(address,uint256)",
        vec![
            to.to_word(),
            amount,
            balance_slot(caller),
            balance_slot(to),
        ],
    )
}

pub fn approve_call(caller: &Address, spender: &Address, amount: Word256) -> AbiCall {
    AbiCall::new(
        "approve(address,uint256)",
        vec![spender.to_word(), amount, allowance_slot(caller, spender)],
    )
}

pub fn transfer_from_call(
    caller: &Address,
    from: &Address,
    to: &Address,
    amount: Word256,
) -> AbiCall {
    AbiCall::new(
        "transferFrom(address,address,uint256)",
        vec![
            from.to_word(),
            to.to_word(),
            amount,
            allowance_slot(from, caller),
            balance_slot(from),
            balance_slot(to),
        ],
    )
}

/// batchTransfer(receivers, value): count, receivers, value, then the
/// sender's balance slot and one slot per receiver.
pub fn batch_transfer_call(caller: &Address, receivers: &[Address], value: Word256) -> AbiCall {
    let mut args = Vec::with_capacity(2 * receivers.len() + 3);
    args.push(Word256::from_u64(receivers.len() as u64));
    for r in receivers {
        args.push(r.to_word());
    }
    args.push(value);
    args.push(balance_slot(caller));
    for r in receivers {
        args.push(balance_slot(r));
    }
    AbiCall::new("batchTransfer(address[],uint256)", args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoded_length_is_four_plus_32_per_arg() {
        let call = AbiCall::new("f()", vec![Word256::ONE, Word256::ZERO]);
        assert_eq!(call.encode().len(), 4 + 64);
        assert_eq!(total_supply_call().encode().len(), 4);
    }

    #[test]
    fn selector_is_first_four_hash_bytes() {
        let sig = "transfer(address,uint256)";
        let sel = selector(sig);
        assert_eq!(sel, sha256(sig.as_bytes()).0[..4]);
    }

    #[test]
    fn decode_word_needs_32_bytes() {
        assert_eq!(decode_word(&[0; 31]), None);
        let mut data = [0u8; 32];
        data[31] = 7;
        assert_eq!(decode_word(&data), Some(Word256::from_u64(7)));
    }

    #[test]
    fn transfer_call_shape() {
        let a = Address([1; 20]);
        let b = Address([2; 20]);
        let call = transfer_call(&a, &b, Word256::from_u64(9));
        assert_eq!(call.args.len(), 4);
        assert_eq!(call.args[0], b.to_word());
        assert_eq!(call.args[2], balance_slot(&a));
        assert_eq!(call.encode().len(), 4 + 4 * 32);
    }
}
