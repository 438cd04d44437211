//! Shared chain-driving helpers for integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use chain2_core::chain::{Chain, ChainConfig, Receipt};
use chain2_core::token::{init_code, AbiCall};
use chain2_core::types::{Account, Address, Transaction};
use chain2_core::word::Word256;

pub const FUND: u64 = 1_000_000_000_000;
pub const GAS: u64 = 2_000_000;

pub struct TestChain {
    pub chain: Chain,
    pub miner: Address,
}

pub fn account(i: u8) -> Address {
    let mut bytes = [0u8; 20];
    bytes[0] = 0xA0;
    bytes[19] = i;
    Address(bytes)
}

impl TestChain {
    /// Chain with `n` funded EOAs (`account(1)..account(n)`) and a separate
    /// miner, difficulty 0, deterministic.
    pub fn new(n: u8) -> TestChain {
        let mut genesis = BTreeMap::new();
        for i in 1..=n {
            genesis.insert(account(i), Account::with_balance(Word256::from_u64(FUND)));
        }
        let config = ChainConfig {
            difficulty_bits: 0,
            ..ChainConfig::default()
        };
        TestChain {
            chain: Chain::new(genesis, config),
            miner: Address([0xEE; 20]),
        }
    }

    pub fn nonce(&self, from: Address) -> u64 {
        self.chain.state.nonce(&from)
    }

    /// Queues one transaction and mines a block containing it.
    pub fn send(&mut self, tx: Transaction) -> Receipt {
        let hash = self.chain.queue(tx).expect("queue");
        let summary = self.chain.build_block(self.miner).expect("mine");
        assert!(
            summary.rejected.is_empty(),
            "transaction rejected: {:?}",
            summary.rejected[0].1
        );
        self.chain.receipt(&hash).expect("receipt").clone()
    }

    pub fn transfer(&mut self, from: Address, to: Address, value: u64) -> Receipt {
        let tx = Transaction {
            sender: from,
            nonce: self.nonce(from),
            gas_price: Word256::ONE,
            gas_limit: GAS,
            to,
            value: Word256::from_u64(value),
            payload: vec![],
        };
        self.send(tx)
    }

    /// Deploys fixture source with the given constructor args.
    pub fn deploy(&mut self, from: Address, source: &str, args: &[Word256], value: u64) -> (Address, Receipt) {
        let init = init_code(source, &from, args).expect("init code");
        let tx = Transaction {
            sender: from,
            nonce: self.nonce(from),
            gas_price: Word256::ONE,
            gas_limit: GAS,
            to: Address::ZERO,
            value: Word256::from_u64(value),
            payload: init.0,
        };
        let receipt = self.send(tx);
        let addr = receipt.contract_address.expect("contract address");
        (addr, receipt)
    }

    pub fn call(
        &mut self,
        from: Address,
        to: Address,
        call: &AbiCall,
        value: u64,
    ) -> Receipt {
        let tx = Transaction {
            sender: from,
            nonce: self.nonce(from),
            gas_price: Word256::ONE,
            gas_limit: GAS,
            to,
            value: Word256::from_u64(value),
            payload: call.encode(),
        };
        self.send(tx)
    }

    pub fn balance(&self, addr: Address) -> Word256 {
        self.chain.state.balance(&addr)
    }

    pub fn storage(&self, addr: Address, slot: Word256) -> Word256 {
        self.chain.state.storage(&addr, &slot)
    }
}
