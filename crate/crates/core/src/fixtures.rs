//! The contract corpus, embedded from `fixtures/*.mvm` at the workspace
//! root. Names double as lookup keys for the CLI and the security lab.

use crate::asm::{assemble, AsmError, Bytecode};

macro_rules! fixture_file {
    ($name:literal) => {
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/",
            $name,
            ".mvm"
        ))
    };
}

pub const SAFE_TOKEN: &str = fixture_file!("safe_token");
pub const VULN_TOKEN: &str = fixture_file!("vuln_token");
pub const BATCH_TOKEN: &str = fixture_file!("batch_token");
pub const BATCH_TOKEN_FIXED: &str = fixture_file!("batch_token_fixed");
pub const DAO_VICTIM: &str = fixture_file!("dao_victim");
pub const DAO_VICTIM_FIXED: &str = fixture_file!("dao_victim_fixed");
pub const REENTRY_ATTACKER: &str = fixture_file!("reentry_attacker");
pub const DELEGATE: &str = fixture_file!("delegate");
pub const DELEGATION: &str = fixture_file!("delegation");
pub const DELEGATION_FIXED: &str = fixture_file!("delegation_fixed");
pub const COINFLIP: &str = fixture_file!("coinflip");
pub const COINFLIP_FIXED: &str = fixture_file!("coinflip_fixed");
pub const FLIP_ATTACKER: &str = fixture_file!("flip_attacker");

/// Every shipped fixture, by name.
pub fn all() -> Vec<(&'static str, &'static str)> {
    vec![
        ("safe_token", SAFE_TOKEN),
        ("vuln_token", VULN_TOKEN),
        ("batch_token", BATCH_TOKEN),
        ("batch_token_fixed", BATCH_TOKEN_FIXED),
        ("dao_victim", DAO_VICTIM),
        ("dao_victim_fixed", DAO_VICTIM_FIXED),
        ("reentry_attacker", REENTRY_ATTACKER),
        ("delegate", DELEGATE),
        ("delegation", DELEGATION),
        ("delegation_fixed", DELEGATION_FIXED),
        ("coinflip", COINFLIP),
        ("coinflip_fixed", COINFLIP_FIXED),
        ("flip_attacker", FLIP_ATTACKER),
    ]
}

pub fn source(name: &str) -> Option<&'static str> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s)
}

/// Assembled runtime bytecode of a fixture.
pub fn runtime(name: &str) -> Result<Bytecode, AsmError> {
    assemble(source(name).unwrap_or_else(|| panic!("unknown fixture '{name}'")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::token::selector;

    #[test]
    fn every_fixture_assembles() {
        for (name, source) in all() {
            let code = assemble(source).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!code.is_empty(), "{name} produced empty code");
        }
    }

    #[test]
    fn assembly_is_deterministic() {
        for (name, source) in all() {
            assert_eq!(
                assemble(source).unwrap(),
                assemble(source).unwrap(),
                "{name} not byte-stable"
            );
        }
    }

    /// The selector constants hard-coded in fixture sources must match the
    /// ABI hashing rule.
    #[test]
    fn embedded_selectors_match_abi() {
        let expect = [
            ("totalSupply()", "0xa368022e"),
            ("balanceOf(address)", "0x5b46f8f6"),
            ("transfer(address,uint256)", "0x3b88ef57"),
            ("approve(address,uint256)", "0x9f0bb8a9"),
            ("transferFrom(address,address,uint256)", "0x4b6685e7"),
            ("batchTransfer(address[],uint256)", "0x4b4b331c"),
            ("deposit()", "0x2df2cef7"),
            ("withdraw()", "0xdfea82f3"),
            ("setDAO(address)", "0xe262eaad"),
            ("setCount(uint256)", "0x462d6a73"),
            ("attack()", "0xa5387474"),
            ("prime()", "0xc2f0caa0"),
            ("getBalance()", "0x3d2ecbec"),
            ("pwn()", "0x8b8599eb"),
            ("ping()", "0xccc7282a"),
            ("flip(bool)", "0x18cd34ce"),
            ("hack()", "0xd99b2f46"),
        ];
        for (sig, hex) in expect {
            let sel = selector(sig);
            let got = format!(
                "0x{:02x}{:02x}{:02x}{:02x}",
                sel[0], sel[1], sel[2], sel[3]
            );
            assert_eq!(got, hex, "selector drift for {sig}");
        }
    }
}
