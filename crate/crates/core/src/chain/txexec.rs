//! Transaction-level execution: intrinsic gas, nonce discipline, fee flow to
//! the miner, and the two payload interpretations (create vs message call).

use crate::hash::sha256_concat;
use crate::types::{Address, Transaction, WorldState};
use crate::vm::{self, gas, ExecOutcome, TraceEvent};
use crate::word::Word256;

use super::block::{BlockContext, Receipt};

/// Rejection reasons; a rejected transaction leaves the state untouched.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TxError {
    #[error("bad nonce: account is at {expected}, transaction carries {got}")]
    BadNonce { expected: u64, got: u64 },
    #[error("gas limit {got} is below the intrinsic cost {intrinsic}")]
    GasLimitBelowIntrinsic { got: u64, intrinsic: u64 },
    #[error("sender balance {balance} cannot cover value plus max fee {required}")]
    InsufficientBalance { balance: Word256, required: Word256 },
    #[error("value + gasLimit * gasPrice overflows")]
    UpfrontOverflow,
}

/// New contract address: the low 20 bytes of H(sender || nonce_be8).
pub fn derive_address(sender: &Address, nonce: u64) -> Address {
    let hash = sha256_concat(&[sender.as_bytes(), &nonce.to_be_bytes()]);
    let mut out = [0u8; 20];
    out.copy_from_slice(&hash.0[12..]);
    Address(out)
}

/// Applies one transaction. The intrinsic 21000 is charged first; the fee
/// `gasUsed * gasPrice` moves to the miner even when execution fails, while
/// value transfer and contract effects roll back with the failure.
pub fn apply_transaction(
    state: &mut WorldState,
    tx: &Transaction,
    ctx: &BlockContext,
    miner: &Address,
) -> Result<(Receipt, Vec<TraceEvent>), TxError> {
    let sender_nonce = state.nonce(&tx.sender);
    if tx.nonce != sender_nonce {
        return Err(TxError::BadNonce {
            expected: sender_nonce,
            got: tx.nonce,
        });
    }
    if tx.gas_limit < gas::TX_INTRINSIC {
        return Err(TxError::GasLimitBelowIntrinsic {
            got: tx.gas_limit,
            intrinsic: gas::TX_INTRINSIC,
        });
    }
    let max_fee = tx
        .gas_price
        .checked_mul(Word256::from_u64(tx.gas_limit))
        .map_err(|_| TxError::UpfrontOverflow)?;
    let upfront = tx
        .value
        .checked_add(max_fee)
        .map_err(|_| TxError::UpfrontOverflow)?;
    let balance = state.balance(&tx.sender);
    if balance < upfront {
        return Err(TxError::InsufficientBalance {
            balance,
            required: upfront,
        });
    }

    // Past this point the transaction is included: the fee and the nonce
    // bump survive any execution failure.
    {
        let sender = state.account_mut(tx.sender);
        sender.balance = sender.balance.wrapping_sub(max_fee);
        sender.nonce += 1;
    }

    let exec_gas = tx.gas_limit - gas::TX_INTRINSIC;
    let mut contract_address = None;
    let outcome: ExecOutcome = if tx.is_creation() {
        let new_addr = derive_address(&tx.sender, tx.nonce);
        let outcome = vm::execute_create(
            state,
            ctx,
            tx.sender,
            new_addr,
            tx.value,
            tx.payload.clone(),
            exec_gas,
        );
        if outcome.status.is_success() {
            contract_address = Some(new_addr);
        }
        outcome
    } else {
        vm::execute_message(
            state,
            ctx,
            tx.sender,
            tx.to,
            tx.value,
            tx.payload.clone(),
            exec_gas,
        )
    };

    let gas_used = gas::TX_INTRINSIC + outcome.gas_used;
    let refund = tx
        .gas_price
        .wrapping_mul(Word256::from_u64(tx.gas_limit - gas_used));
    let fee = tx.gas_price.wrapping_mul(Word256::from_u64(gas_used));
    {
        let sender = state.account_mut(tx.sender);
        sender.balance = sender.balance.wrapping_add(refund);
    }
    {
        let miner_account = state.account_mut(*miner);
        miner_account.balance = miner_account.balance.wrapping_add(fee);
    }

    let receipt = Receipt {
        tx_hash: tx.hash(),
        status: outcome.status,
        gas_used,
        contract_address,
        logs: outcome.logs,
    };
    Ok((receipt, outcome.trace))
}
