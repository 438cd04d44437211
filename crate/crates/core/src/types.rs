//! Domain types: addresses, accounts, world state, transactions, logs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Visitor;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::hash::{self, sha256_concat, Hash32, HexError};
use crate::word::Word256;

/// 20-byte account identifier. The zero address is reserved: a transaction
/// whose `to` field is zero is a contract creation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address(pub [u8; 20]);

impl Address {
    pub const ZERO: Self = Address([0; 20]);

    pub fn as_bytes(&self) -> &[u8; 20] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 20]
    }

    /// The address as a word: 20 bytes right-aligned in 32.
    pub fn to_word(&self) -> Word256 {
        Word256::from_be_slice(&self.0)
    }

    /// Low 20 bytes of a word.
    pub fn from_word(w: Word256) -> Self {
        let bytes = w.to_be_bytes();
        let mut out = [0u8; 20];
        out.copy_from_slice(&bytes[12..]);
        Address(out)
    }

    pub fn to_hex(&self) -> String {
        hash::bytes_to_hex(&self.0)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for Address {
    type Err = HexError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Address(hash::parse_hex_array::<20>(s)?))
    }
}

impl Serialize for Address {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Address {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct AddrVisitor;
        impl Visitor<'_> for AddrVisitor {
            type Value = Address;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a 0x-prefixed 20-byte hex string")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Address, E> {
                v.parse().map_err(E::custom)
            }
        }
        deserializer.deserialize_str(AddrVisitor)
    }
}

/// Storage maps serialize as `{"0x<64 hex>": "0x<64 hex>"}`: slots are mostly
/// hash-derived identifiers, so fixed-width hex keeps them canonical.
mod storage_serde {
    use super::*;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<Word256, Word256>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = serializer.serialize_map(Some(map.len()))?;
        for (k, v) in map {
            m.serialize_entry(&k.to_hex_string(), &v.to_hex_string())?;
        }
        m.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<Word256, Word256>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut out = BTreeMap::new();
        for (k, v) in raw {
            let key = Word256::parse(&k).map_err(serde::de::Error::custom)?;
            let val = Word256::parse(&v).map_err(serde::de::Error::custom)?;
            out.insert(key, val);
        }
        Ok(out)
    }
}

/// One account's state. An account with empty code never executes (EOA);
/// zero-valued storage entries are pruned so the commitment stays canonical.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Account {
    #[serde(with = "crate::serde_util::u64_string", default)]
    pub nonce: u64,
    pub balance: Word256,
    #[serde(with = "storage_serde", default)]
    pub storage: BTreeMap<Word256, Word256>,
    #[serde(with = "crate::hash::hex_bytes", default)]
    pub code: Vec<u8>,
}

impl Account {
    pub fn with_balance(balance: Word256) -> Self {
        Account {
            balance,
            ..Default::default()
        }
    }

    pub fn is_contract(&self) -> bool {
        !self.code.is_empty()
    }

    /// True when indistinguishable from an absent account.
    pub fn is_empty(&self) -> bool {
        self.nonce == 0 && self.balance.is_zero() && self.storage.is_empty() && self.code.is_empty()
    }

    pub fn storage_get(&self, key: &Word256) -> Word256 {
        self.storage.get(key).copied().unwrap_or(Word256::ZERO)
    }

    /// Zero writes delete the entry.
    pub fn storage_set(&mut self, key: Word256, value: Word256) {
        if value.is_zero() {
            self.storage.remove(&key);
        } else {
            self.storage.insert(key, value);
        }
    }
}

/// The mapping from addresses to account states. An absent address is
/// equivalent to a default (all-zero, codeless) account.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct WorldState {
    pub accounts: BTreeMap<Address, Account>,
}

impl WorldState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn account(&self, addr: &Address) -> Option<&Account> {
        self.accounts.get(addr)
    }

    pub fn account_mut(&mut self, addr: Address) -> &mut Account {
        self.accounts.entry(addr).or_default()
    }

    pub fn balance(&self, addr: &Address) -> Word256 {
        self.account(addr).map(|a| a.balance).unwrap_or_default()
    }

    pub fn nonce(&self, addr: &Address) -> u64 {
        self.account(addr).map(|a| a.nonce).unwrap_or_default()
    }

    pub fn code(&self, addr: &Address) -> &[u8] {
        self.account(addr).map(|a| a.code.as_slice()).unwrap_or(&[])
    }

    pub fn storage(&self, addr: &Address, key: &Word256) -> Word256 {
        self.account(addr)
            .map(|a| a.storage_get(key))
            .unwrap_or_default()
    }
}

/// The paper's seven-field transaction. `payload` is init code when `to` is
/// the zero address and call data otherwise; the sender field is trusted
/// (signatures are out of scope).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Transaction {
    pub sender: Address,
    #[serde(with = "crate::serde_util::u64_string")]
    pub nonce: u64,
    pub gas_price: Word256,
    #[serde(with = "crate::serde_util::u64_string")]
    pub gas_limit: u64,
    pub to: Address,
    pub value: Word256,
    #[serde(with = "crate::hash::hex_bytes", default)]
    pub payload: Vec<u8>,
}

impl Transaction {
    pub fn is_creation(&self) -> bool {
        self.to.is_zero()
    }

    /// Canonical transaction hash over all seven fields.
    pub fn hash(&self) -> Hash32 {
        sha256_concat(&[
            self.sender.as_bytes(),
            &self.nonce.to_be_bytes(),
            &self.gas_price.to_be_bytes(),
            &self.gas_limit.to_be_bytes(),
            self.to.as_bytes(),
            &self.value.to_be_bytes(),
            &self.payload,
        ])
    }
}

/// Root hash committing an entire world state.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct StateCommitment(pub Hash32);

impl fmt::Display for StateCommitment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

mod topics_serde {
    use super::*;

    pub fn serialize<S: Serializer>(
        topics: &Vec<Word256>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(topics.len()))?;
        for t in topics {
            seq.serialize_element(&t.to_hex_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Word256>, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|s| Word256::parse(&s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// One emitted log: the executing contract, two topic words and a data blob.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LogRecord {
    pub address: Address,
    #[serde(with = "topics_serde")]
    pub topics: Vec<Word256>,
    #[serde(with = "crate::hash::hex_bytes", default)]
    pub data: Vec<u8>,
}
