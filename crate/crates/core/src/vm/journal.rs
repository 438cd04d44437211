//! Undo log for state writes. Writes apply to the world state immediately;
//! reverting to a checkpoint walks the log backwards and restores every
//! previous value, discarding logs emitted past the checkpoint.

use crate::types::{Address, LogRecord, WorldState};
use crate::word::Word256;

/// One reversible write, tagged with the frame depth that performed it.
#[derive(Clone, Debug)]
pub enum JournalEntry {
    StorageSet {
        addr: Address,
        key: Word256,
        prev: Word256,
    },
    BalanceSet {
        addr: Address,
        prev: Word256,
    },
    NonceSet {
        addr: Address,
        prev: u64,
    },
    CodeSet {
        addr: Address,
        prev: Vec<u8>,
    },
    LogEmitted,
}

/// World state plus its undo log and the logs emitted so far.
pub struct JournaledState<'a> {
    pub state: &'a mut WorldState,
    entries: Vec<(u32, JournalEntry)>,
    pub logs: Vec<LogRecord>,
}

/// A position in the journal to revert back to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checkpoint(usize);

impl<'a> JournaledState<'a> {
    pub fn new(state: &'a mut WorldState) -> Self {
        JournaledState {
            state,
            entries: Vec::new(),
            logs: Vec::new(),
        }
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint(self.entries.len())
    }

    pub fn set_storage(&mut self, depth: u32, addr: Address, key: Word256, value: Word256) {
        let account = self.state.account_mut(addr);
        let prev = account.storage_get(&key);
        if prev == value {
            return;
        }
        account.storage_set(key, value);
        self.entries
            .push((depth, JournalEntry::StorageSet { addr, key, prev }));
    }

    pub fn set_balance(&mut self, depth: u32, addr: Address, value: Word256) {
        let account = self.state.account_mut(addr);
        let prev = account.balance;
        if prev == value {
            return;
        }
        account.balance = value;
        self.entries
            .push((depth, JournalEntry::BalanceSet { addr, prev }));
    }

    /// Moves `value` between accounts; fails without side effects when the
    /// source balance is insufficient.
    pub fn transfer(
        &mut self,
        depth: u32,
        from: Address,
        to: Address,
        value: Word256,
    ) -> Result<(), ()> {
        if value.is_zero() {
            return Ok(());
        }
        let from_balance = self.state.balance(&from);
        if from_balance < value {
            return Err(());
        }
        self.set_balance(depth, from, from_balance.wrapping_sub(value));
        let to_balance = self.state.balance(&to);
        self.set_balance(depth, to, to_balance.wrapping_add(value));
        Ok(())
    }

    pub fn set_nonce(&mut self, depth: u32, addr: Address, value: u64) {
        let account = self.state.account_mut(addr);
        let prev = account.nonce;
        if prev == value {
            return;
        }
        account.nonce = value;
        self.entries
            .push((depth, JournalEntry::NonceSet { addr, prev }));
    }

    pub fn set_code(&mut self, depth: u32, addr: Address, code: Vec<u8>) {
        let account = self.state.account_mut(addr);
        let prev = std::mem::replace(&mut account.code, code);
        self.entries
            .push((depth, JournalEntry::CodeSet { addr, prev }));
    }

    pub fn emit_log(&mut self, depth: u32, log: LogRecord) {
        self.logs.push(log);
        self.entries.push((depth, JournalEntry::LogEmitted));
    }

    /// Restores every value written after the checkpoint, newest first.
    pub fn revert_to(&mut self, checkpoint: Checkpoint) {
        while self.entries.len() > checkpoint.0 {
            let (_, entry) = self.entries.pop().unwrap();
            match entry {
                JournalEntry::StorageSet { addr, key, prev } => {
                    self.state.account_mut(addr).storage_set(key, prev);
                }
                JournalEntry::BalanceSet { addr, prev } => {
                    self.state.account_mut(addr).balance = prev;
                }
                JournalEntry::NonceSet { addr, prev } => {
                    self.state.account_mut(addr).nonce = prev;
                }
                JournalEntry::CodeSet { addr, prev } => {
                    self.state.account_mut(addr).code = prev;
                }
                JournalEntry::LogEmitted => {
                    self.logs.pop();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::merkle::state_root;

    fn addr(b: u8) -> Address {
        Address([b; 20])
    }

    #[test]
    fn revert_restores_everything_in_reverse_order() {
        let mut state = WorldState::new();
        state.account_mut(addr(1)).balance = Word256::from_u64(100);
        let before = state_root(&state);

        let mut js = JournaledState::new(&mut state);
        let cp = js.checkpoint();
        js.set_storage(0, addr(1), Word256::ZERO, Word256::from_u64(7));
        js.set_storage(1, addr(1), Word256::ZERO, Word256::from_u64(9));
        js.transfer(1, addr(1), addr(2), Word256::from_u64(40)).unwrap();
        js.set_nonce(0, addr(1), 3);
        js.set_code(0, addr(2), vec![1, 2, 3]);
        js.emit_log(
            0,
            LogRecord {
                address: addr(2),
                topics: vec![],
                data: vec![],
            },
        );
        assert_eq!(js.logs.len(), 1);
        js.revert_to(cp);
        assert!(js.logs.is_empty());
        assert_eq!(state_root(&state), before);
    }

    #[test]
    fn transfer_fails_on_insufficient_balance() {
        let mut state = WorldState::new();
        state.account_mut(addr(1)).balance = Word256::from_u64(5);
        let mut js = JournaledState::new(&mut state);
        assert!(js.transfer(0, addr(1), addr(2), Word256::from_u64(6)).is_err());
        assert_eq!(state.balance(&addr(1)), Word256::from_u64(5));
        assert_eq!(state.balance(&addr(2)), Word256::ZERO);
    }

    #[test]
    fn partial_revert_keeps_earlier_writes() {
        let mut state = WorldState::new();
        let mut js = JournaledState::new(&mut state);
        js.set_storage(0, addr(1), Word256::ZERO, Word256::from_u64(1));
        let cp = js.checkpoint();
        js.set_storage(1, addr(1), Word256::ZERO, Word256::from_u64(2));
        js.revert_to(cp);
        assert_eq!(
            state.storage(&addr(1), &Word256::ZERO),
            Word256::from_u64(1)
        );
    }
}
