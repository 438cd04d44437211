//! A deterministic, single-process miniature of the Ethereum execution
//! model: accounts, a Merkle-committed world state, a gas-metered stack VM,
//! chain production with toy proof of work, and token plumbing.

pub mod asm;
pub mod chain;
pub mod fixtures;
pub mod hash;
pub mod merkle;
pub mod serde_util;
pub mod token;
pub mod types;
pub mod vm;
pub mod word;

pub use hash::{sha256, Hash32};
pub use types::{Account, Address, LogRecord, StateCommitment, Transaction, WorldState};
pub use word::Word256;
