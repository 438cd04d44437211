//! Pending transactions, at most one per (sender, nonce).

use std::collections::BTreeMap;

use crate::types::{Address, Transaction};

#[derive(Clone, Debug, Default)]
pub struct Mempool {
    pending: BTreeMap<(Address, u64), Transaction>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("a transaction from {sender} with nonce {nonce} is already pending")]
pub struct DuplicatePending {
    pub sender: Address,
    pub nonce: u64,
}

impl Mempool {
    pub fn insert(&mut self, tx: Transaction) -> Result<(), DuplicatePending> {
        let key = (tx.sender, tx.nonce);
        if self.pending.contains_key(&key) {
            return Err(DuplicatePending {
                sender: tx.sender,
                nonce: tx.nonce,
            });
        }
        self.pending.insert(key, tx);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.pending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transaction> {
        self.pending.values()
    }

    /// Removes everything, ordered the way miners like it: gas price
    /// descending, ties broken by lower sender address then lower nonce.
    pub fn drain_ordered(&mut self) -> Vec<Transaction> {
        let mut txs: Vec<Transaction> = std::mem::take(&mut self.pending).into_values().collect();
        txs.sort_by(|a, b| {
            b.gas_price
                .cmp(&a.gas_price)
                .then(a.sender.cmp(&b.sender))
                .then(a.nonce.cmp(&b.nonce))
        });
        txs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word256;

    fn tx(sender: u8, nonce: u64, gas_price: u64) -> Transaction {
        Transaction {
            sender: Address([sender; 20]),
            nonce,
            gas_price: Word256::from_u64(gas_price),
            gas_limit: 21000,
            to: Address([0xEE; 20]),
            value: Word256::ZERO,
            payload: vec![],
        }
    }

    #[test]
    fn orders_by_gas_price_descending() {
        let mut pool = Mempool::default();
        pool.insert(tx(1, 0, 5)).unwrap();
        pool.insert(tx(2, 0, 9)).unwrap();
        pool.insert(tx(3, 0, 1)).unwrap();
        let order: Vec<u64> = pool
            .drain_ordered()
            .iter()
            .map(|t| t.gas_price.low_u64())
            .collect();
        assert_eq!(order, vec![9, 5, 1]);
    }

    #[test]
    fn ties_break_by_sender_then_nonce() {
        let mut pool = Mempool::default();
        pool.insert(tx(2, 0, 7)).unwrap();
        pool.insert(tx(1, 1, 7)).unwrap();
        pool.insert(tx(1, 0, 7)).unwrap();
        let order: Vec<(u8, u64)> = pool
            .drain_ordered()
            .iter()
            .map(|t| (t.sender.0[0], t.nonce))
            .collect();
        assert_eq!(order, vec![(1, 0), (1, 1), (2, 0)]);
    }

    #[test]
    fn duplicate_sender_nonce_rejected() {
        let mut pool = Mempool::default();
        pool.insert(tx(1, 0, 5)).unwrap();
        assert!(pool.insert(tx(1, 0, 9)).is_err());
        assert_eq!(pool.len(), 1);
    }
}
