//! The token fixtures driven through the full transaction pipeline.

mod common;

use chain2_core::fixtures;
use chain2_core::token::{
    self, balance_of_call, balance_slot, total_supply_call, transfer_call, transfer_from_call,
};
use chain2_core::vm::ExecStatus;
use chain2_core::word::Word256;
use common::{account, TestChain};

#[test]
fn deploy_transfer_walkthrough() {
    let mut t = TestChain::new(2);
    let deployer = account(1);
    let other = account(2);

    let nonce_before = t.nonce(deployer);
    let (token_addr, receipt) = t.deploy(
        deployer,
        fixtures::SAFE_TOKEN,
        &[Word256::from_u64(2048)],
        0,
    );
    assert_eq!(receipt.status, ExecStatus::Success);
    // Both the sender's and the new contract's nonce advanced by one.
    assert_eq!(t.nonce(deployer), nonce_before + 1);
    assert_eq!(t.chain.state.nonce(&token_addr), 1);
    // Deployment emits Transfer(0 -> deployer, supply).
    assert_eq!(receipt.logs.len(), 1);
    assert_eq!(
        receipt.logs[0].topics,
        vec![Word256::ZERO, deployer.to_word()]
    );

    let supply = token::total_supply(&t.chain.state, &token_addr);
    assert_eq!(supply, Word256::from_u64(2048));
    assert_eq!(
        token::balance_of(&t.chain.state, &token_addr, &deployer),
        Word256::from_u64(2048)
    );

    let holders_before = token::holders(
        &t.chain.state,
        &token_addr,
        t.chain.state.accounts.keys(),
    );
    assert_eq!(holders_before.len(), 1);

    let receipt = t.call(deployer, token_addr, &transfer_call(&deployer, &other, Word256::ONE), 0);
    assert_eq!(receipt.status, ExecStatus::Success);
    assert_eq!(receipt.logs.len(), 1);
    assert_eq!(
        receipt.logs[0].topics,
        vec![deployer.to_word(), other.to_word()]
    );

    assert_eq!(
        token::balance_of(&t.chain.state, &token_addr, &deployer),
        Word256::from_u64(2047)
    );
    assert_eq!(
        token::balance_of(&t.chain.state, &token_addr, &other),
        Word256::ONE
    );
    let holders = token::holders(&t.chain.state, &token_addr, t.chain.state.accounts.keys());
    assert_eq!(holders.len(), 2);
}

#[test]
fn view_calls_decode_balances() {
    let mut t = TestChain::new(2);
    let deployer = account(1);
    let (token_addr, _) = t.deploy(
        deployer,
        fixtures::SAFE_TOKEN,
        &[Word256::from_u64(500)],
        0,
    );
    let out = t
        .chain
        .view_call(deployer, token_addr, total_supply_call().encode(), 500_000);
    assert_eq!(out.status, ExecStatus::Success);
    assert_eq!(token::decode_word(&out.return_data), Some(Word256::from_u64(500)));

    let out = t.chain.view_call(
        deployer,
        token_addr,
        balance_of_call(&deployer).encode(),
        500_000,
    );
    assert_eq!(token::decode_word(&out.return_data), Some(Word256::from_u64(500)));
}

#[test]
fn zero_supply_token_still_transfers_zero() {
    let mut t = TestChain::new(2);
    let deployer = account(1);
    let (token_addr, _) = t.deploy(deployer, fixtures::SAFE_TOKEN, &[Word256::ZERO], 0);
    let receipt = t.call(
        deployer,
        token_addr,
        &transfer_call(&deployer, &account(2), Word256::ZERO),
        0,
    );
    assert_eq!(receipt.status, ExecStatus::Success);
    assert_eq!(
        token::balance_of(&t.chain.state, &token_addr, &account(2)),
        Word256::ZERO
    );
}

#[test]
fn distinct_addresses_for_two_deployments() {
    let mut t = TestChain::new(1);
    let deployer = account(1);
    let (a, _) = t.deploy(deployer, fixtures::SAFE_TOKEN, &[Word256::from_u64(1)], 0);
    let (b, _) = t.deploy(deployer, fixtures::SAFE_TOKEN, &[Word256::from_u64(1)], 0);
    assert_ne!(a, b);
}

#[test]
fn safe_transfer_over_balance_reverts_cleanly() {
    let mut t = TestChain::new(2);
    let deployer = account(1);
    let (token_addr, _) = t.deploy(deployer, fixtures::SAFE_TOKEN, &[Word256::from_u64(10)], 0);
    let receipt = t.call(
        deployer,
        token_addr,
        &transfer_call(&deployer, &account(2), Word256::from_u64(11)),
        0,
    );
    assert_eq!(receipt.status, ExecStatus::Revert);
    assert!(receipt.logs.is_empty());
    assert_eq!(
        token::balance_of(&t.chain.state, &token_addr, &deployer),
        Word256::from_u64(10)
    );
    assert_eq!(
        token::balance_of(&t.chain.state, &token_addr, &account(2)),
        Word256::ZERO
    );
}

#[test]
fn approve_then_transfer_from_shifts_allowance_and_balances() {
    let mut t = TestChain::new(3);
    let owner = account(1);
    let spender = account(2);
    let sink = account(3);
    let (token_addr, _) = t.deploy(owner, fixtures::SAFE_TOKEN, &[Word256::from_u64(100)], 0);

    let receipt = t.call(
        owner,
        token_addr,
        &token::approve_call(&owner, &spender, Word256::from_u64(10)),
        0,
    );
    assert_eq!(receipt.status, ExecStatus::Success);
    assert_eq!(
        token::allowance_of(&t.chain.state, &token_addr, &owner, &spender),
        Word256::from_u64(10)
    );

    let receipt = t.call(
        spender,
        token_addr,
        &transfer_from_call(&spender, &owner, &sink, Word256::from_u64(7)),
        0,
    );
    assert_eq!(receipt.status, ExecStatus::Success);
    assert_eq!(
        token::allowance_of(&t.chain.state, &token_addr, &owner, &spender),
        Word256::from_u64(3)
    );
    assert_eq!(
        token::balance_of(&t.chain.state, &token_addr, &owner),
        Word256::from_u64(93)
    );
    assert_eq!(
        token::balance_of(&t.chain.state, &token_addr, &sink),
        Word256::from_u64(7)
    );

    // Exceeding the remaining allowance reverts.
    let receipt = t.call(
        spender,
        token_addr,
        &transfer_from_call(&spender, &owner, &sink, Word256::from_u64(4)),
        0,
    );
    assert_eq!(receipt.status, ExecStatus::Revert);
}

#[test]
fn vuln_token_underflow_inflates_sender_balance() {
    let mut t = TestChain::new(2);
    let deployer = account(1);
    let (token_addr, _) = t.deploy(deployer, fixtures::VULN_TOKEN, &[Word256::from_u64(5)], 0);
    // Sending balance + 1 wraps the stored difference to ~2^256.
    let receipt = t.call(
        deployer,
        token_addr,
        &transfer_call(&deployer, &account(2), Word256::from_u64(6)),
        0,
    );
    assert_eq!(receipt.status, ExecStatus::Success);
    let inflated = token::balance_of(&t.chain.state, &token_addr, &deployer);
    assert_eq!(inflated, Word256::MAX); // 5 - 6 mod 2^256
    assert_eq!(
        token::balance_of(&t.chain.state, &token_addr, &account(2)),
        Word256::from_u64(6)
    );
}

#[test]
fn supply_conservation_under_random_call_sequences() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);

    let mut t = TestChain::new(4);
    let players: Vec<_> = (1..=4).map(account).collect();
    let supply = Word256::from_u64(1_000_000);
    let (token_addr, _) = t.deploy(players[0], fixtures::SAFE_TOKEN, &[supply], 0);

    let mut transfer_logs = 0u64;
    let mut successful_moves = 0u64;
    for _ in 0..1000 {
        let a = players[rng.gen_range(0..players.len())];
        let b = players[rng.gen_range(0..players.len())];
        let amount = Word256::from_u64(rng.gen_range(0..2000));
        let receipt = match rng.gen_range(0..3) {
            0 => t.call(a, token_addr, &transfer_call(&a, &b, amount), 0),
            1 => t.call(a, token_addr, &token::approve_call(&a, &b, amount), 0),
            _ => {
                let c = players[rng.gen_range(0..players.len())];
                t.call(b, token_addr, &transfer_from_call(&b, &a, &c, amount), 0)
            }
        };
        let is_move = receipt.status.is_success() && !receipt.logs.is_empty();
        if is_move {
            successful_moves += 1;
        }
        transfer_logs += receipt.logs.len() as u64;
    }

    // Balance-changing calls and Transfer logs line up one to one.
    assert_eq!(transfer_logs, successful_moves);

    let total: Word256 = players.iter().fold(Word256::ZERO, |acc, p| {
        acc.wrapping_add(t.storage(token_addr, balance_slot(p)))
    });
    assert_eq!(total, supply);
    assert_eq!(token::total_supply(&t.chain.state, &token_addr), supply);
}
