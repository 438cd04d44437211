//! One VM call context.

use crate::types::Address;
use crate::word::Word256;

/// A single call frame: whose code runs, whose storage it touches, and the
/// execution resources it owns. Plain CALL frames have
/// `code_addr == storage_addr`; DELEGATECALL frames inherit the caller
/// frame's storage address, caller and call value.
#[derive(Clone, Debug)]
pub struct Frame {
    /// Account whose code is executing.
    pub code_addr: Address,
    /// Account whose storage SLOAD/SSTORE touch and whose balance funds
    /// outgoing value.
    pub storage_addr: Address,
    pub caller: Address,
    pub call_value: Word256,
    pub call_data: Vec<u8>,
    /// Code to run (loaded from `code_addr`, or init code for creations).
    pub code: Vec<u8>,
    pub stack: Vec<Word256>,
    pub memory: Vec<u8>,
    pub gas: u64,
    pub depth: u32,
}

impl Frame {
    /// Top-level frame for a message call or init-code run.
    pub fn top(
        code_addr: Address,
        caller: Address,
        call_value: Word256,
        call_data: Vec<u8>,
        code: Vec<u8>,
        gas: u64,
    ) -> Self {
        Frame {
            code_addr,
            storage_addr: code_addr,
            caller,
            call_value,
            call_data,
            code,
            stack: Vec::new(),
            memory: Vec::new(),
            gas,
            depth: 0,
        }
    }
}
