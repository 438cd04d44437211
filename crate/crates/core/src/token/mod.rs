//! ERC-20-style token support: call encoding, storage layout and deployment
//! wrappers around the assembly fixtures.

pub mod abi;
pub mod deploy;
pub mod layout;

pub use abi::{
    approve_call, balance_of_call, batch_transfer_call, decode_word, selector, total_supply_call,
    transfer_call, transfer_event_topic, transfer_from_call, AbiCall, TRANSFER_EVENT_SIGNATURE,
};
pub use deploy::{ctor_erc20, ctor_pragma, ctor_store_args, init_code, wrap_init, DeployError};
pub use layout::{
    allowance_of, allowance_slot, balance_of, balance_slot, holders, total_supply,
    TOTAL_SUPPLY_SLOT,
};
