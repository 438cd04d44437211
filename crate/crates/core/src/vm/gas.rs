//! Gas schedule. Every opcode costs the base 3 unless listed here. The
//! numbers are chosen so the 2300 transfer stipend admits simple fallbacks
//! but never a storage write.

/// Default cost of one instruction.
pub const BASE: u64 = 3;
/// SLOAD.
pub const SLOAD: u64 = 200;
/// SSTORE writing a slot whose current value is zero.
pub const SSTORE_SET: u64 = 5000;
/// SSTORE updating a slot that already holds a nonzero value.
pub const SSTORE_UPDATE: u64 = 2000;
/// SSTORE faults with out-of-gas when the frame has at most this much gas
/// left, so a 2300-gas stipend can never complete a storage write.
pub const SSTORE_SENTRY: u64 = 2300;
/// Base cost of CALL and DELEGATECALL; also the reserve a parent keeps when
/// forwarding gas ("all but reserve").
pub const CALL_BASE: u64 = 700;
/// Fixed gas forwarded to the callee of TRANSFER.
pub const TRANSFER_STIPEND: u64 = 2300;
/// LOG2 base cost.
pub const LOG_BASE: u64 = 375;
/// LOG2 per data byte.
pub const LOG_PER_BYTE: u64 = 8;
/// Memory expansion, per new 32-byte word.
pub const MEMORY_PER_WORD: u64 = 3;
/// Charged up front for every transaction.
pub const TX_INTRINSIC: u64 = 21000;

/// Stack cells per frame.
pub const MAX_STACK: usize = 1024;
/// Nested call frames per transaction. The re-entrancy fixture needs two
/// frames per drain level, so the paper's count = 50 attack peaks at depth
/// 102; 128 keeps a guard against unbounded native recursion above that.
pub const MAX_CALL_DEPTH: u32 = 128;
