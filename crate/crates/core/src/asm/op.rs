//! The instruction set. Opcode numbering mirrors real EVM where an
//! equivalent exists; custom opcodes (checked arithmetic, TRANSFER) occupy
//! unused slots. PUSH always carries a 32-byte immediate.

use std::fmt;

/// One opcode. `Dup(n)` and `Swap(n)` carry 1..=16.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Op {
    Stop,
    Add,
    Mul,
    Sub,
    Div,
    Mod,
    CAdd,
    CSub,
    CMul,
    Lt,
    Gt,
    Eq,
    IsZero,
    And,
    Or,
    Not,
    Address,
    Balance,
    Caller,
    CallValue,
    CallDataLoad,
    CallDataSize,
    BlockHash,
    Timestamp,
    Number,
    SelfBalance,
    GasLeft,
    MLoad,
    MStore,
    SLoad,
    SStore,
    Jump,
    JumpI,
    JumpDest,
    Push,
    Dup(u8),
    Swap(u8),
    Log2,
    Call,
    DelegateCall,
    Transfer,
    Return,
    Revert,
}

pub const OP_STOP: u8 = 0x00;
pub const OP_ADD: u8 = 0x01;
pub const OP_MUL: u8 = 0x02;
pub const OP_SUB: u8 = 0x03;
pub const OP_DIV: u8 = 0x04;
pub const OP_MOD: u8 = 0x06;
pub const OP_CADD: u8 = 0x0a;
pub const OP_CSUB: u8 = 0x0b;
pub const OP_CMUL: u8 = 0x0c;
pub const OP_LT: u8 = 0x10;
pub const OP_GT: u8 = 0x11;
pub const OP_EQ: u8 = 0x14;
pub const OP_ISZERO: u8 = 0x15;
pub const OP_AND: u8 = 0x16;
pub const OP_OR: u8 = 0x17;
pub const OP_NOT: u8 = 0x19;
pub const OP_ADDRESS: u8 = 0x30;
pub const OP_BALANCE: u8 = 0x31;
pub const OP_CALLER: u8 = 0x33;
pub const OP_CALLVALUE: u8 = 0x34;
pub const OP_CALLDATALOAD: u8 = 0x35;
pub const OP_CALLDATASIZE: u8 = 0x36;
pub const OP_BLOCKHASH: u8 = 0x40;
pub const OP_TIMESTAMP: u8 = 0x42;
pub const OP_NUMBER: u8 = 0x43;
pub const OP_SELFBALANCE: u8 = 0x47;
pub const OP_GASLEFT: u8 = 0x5a;
pub const OP_MLOAD: u8 = 0x51;
pub const OP_MSTORE: u8 = 0x52;
pub const OP_SLOAD: u8 = 0x54;
pub const OP_SSTORE: u8 = 0x55;
pub const OP_JUMP: u8 = 0x56;
pub const OP_JUMPI: u8 = 0x57;
pub const OP_JUMPDEST: u8 = 0x5b;
pub const OP_PUSH: u8 = 0x7f;
pub const OP_DUP1: u8 = 0x80;
pub const OP_SWAP1: u8 = 0x90;
pub const OP_LOG2: u8 = 0xa2;
pub const OP_CALL: u8 = 0xf1;
pub const OP_DELEGATECALL: u8 = 0xf4;
pub const OP_TRANSFER: u8 = 0xf0;
pub const OP_RETURN: u8 = 0xf3;
pub const OP_REVERT: u8 = 0xfd;

/// Byte length of one encoded instruction.
pub const PUSH_ENCODED_LEN: usize = 33;

impl Op {
    pub fn byte(self) -> u8 {
        match self {
            Op::Stop => OP_STOP,
            Op::Add => OP_ADD,
            Op::Mul => OP_MUL,
            Op::Sub => OP_SUB,
            Op::Div => OP_DIV,
            Op::Mod => OP_MOD,
            Op::CAdd => OP_CADD,
            Op::CSub => OP_CSUB,
            Op::CMul => OP_CMUL,
            Op::Lt => OP_LT,
            Op::Gt => OP_GT,
            Op::Eq => OP_EQ,
            Op::IsZero => OP_ISZERO,
            Op::And => OP_AND,
            Op::Or => OP_OR,
            Op::Not => OP_NOT,
            Op::Address => OP_ADDRESS,
            Op::Balance => OP_BALANCE,
            Op::Caller => OP_CALLER,
            Op::CallValue => OP_CALLVALUE,
            Op::CallDataLoad => OP_CALLDATALOAD,
            Op::CallDataSize => OP_CALLDATASIZE,
            Op::BlockHash => OP_BLOCKHASH,
            Op::Timestamp => OP_TIMESTAMP,
            Op::Number => OP_NUMBER,
            Op::SelfBalance => OP_SELFBALANCE,
            Op::GasLeft => OP_GASLEFT,
            Op::MLoad => OP_MLOAD,
            Op::MStore => OP_MSTORE,
            Op::SLoad => OP_SLOAD,
            Op::SStore => OP_SSTORE,
            Op::Jump => OP_JUMP,
            Op::JumpI => OP_JUMPI,
            Op::JumpDest => OP_JUMPDEST,
            Op::Push => OP_PUSH,
            Op::Dup(n) => OP_DUP1 + (n - 1),
            Op::Swap(n) => OP_SWAP1 + (n - 1),
            Op::Log2 => OP_LOG2,
            Op::Call => OP_CALL,
            Op::DelegateCall => OP_DELEGATECALL,
            Op::Transfer => OP_TRANSFER,
            Op::Return => OP_RETURN,
            Op::Revert => OP_REVERT,
        }
    }

    pub fn from_byte(b: u8) -> Option<Op> {
        Some(match b {
            OP_STOP => Op::Stop,
            OP_ADD => Op::Add,
            OP_MUL => Op::Mul,
            OP_SUB => Op::Sub,
            OP_DIV => Op::Div,
            OP_MOD => Op::Mod,
            OP_CADD => Op::CAdd,
            OP_CSUB => Op::CSub,
            OP_CMUL => Op::CMul,
            OP_LT => Op::Lt,
            OP_GT => Op::Gt,
            OP_EQ => Op::Eq,
            OP_ISZERO => Op::IsZero,
            OP_AND => Op::And,
            OP_OR => Op::Or,
            OP_NOT => Op::Not,
            OP_ADDRESS => Op::Address,
            OP_BALANCE => Op::Balance,
            OP_CALLER => Op::Caller,
            OP_CALLVALUE => Op::CallValue,
            OP_CALLDATALOAD => Op::CallDataLoad,
            OP_CALLDATASIZE => Op::CallDataSize,
            OP_BLOCKHASH => Op::BlockHash,
            OP_TIMESTAMP => Op::Timestamp,
            OP_NUMBER => Op::Number,
            OP_SELFBALANCE => Op::SelfBalance,
            OP_GASLEFT => Op::GasLeft,
            OP_MLOAD => Op::MLoad,
            OP_MSTORE => Op::MStore,
            OP_SLOAD => Op::SLoad,
            OP_SSTORE => Op::SStore,
            OP_JUMP => Op::Jump,
            OP_JUMPI => Op::JumpI,
            OP_JUMPDEST => Op::JumpDest,
            OP_PUSH => Op::Push,
            b if (OP_DUP1..OP_DUP1 + 16).contains(&b) => Op::Dup(b - OP_DUP1 + 1),
            b if (OP_SWAP1..OP_SWAP1 + 16).contains(&b) => Op::Swap(b - OP_SWAP1 + 1),
            OP_LOG2 => Op::Log2,
            OP_CALL => Op::Call,
            OP_DELEGATECALL => Op::DelegateCall,
            OP_TRANSFER => Op::Transfer,
            OP_RETURN => Op::Return,
            OP_REVERT => Op::Revert,
            _ => return None,
        })
    }

    pub fn mnemonic(self) -> String {
        match self {
            Op::Dup(n) => format!("DUP{n}"),
            Op::Swap(n) => format!("SWAP{n}"),
            other => other.static_mnemonic().to_string(),
        }
    }

    fn static_mnemonic(self) -> &'static str {
        match self {
            Op::Stop => "STOP",
            Op::Add => "ADD",
            Op::Mul => "MUL",
            Op::Sub => "SUB",
            Op::Div => "DIV",
            Op::Mod => "MOD",
            Op::CAdd => "CADD",
            Op::CSub => "CSUB",
            Op::CMul => "CMUL",
            Op::Lt => "LT",
            Op::Gt => "GT",
            Op::Eq => "EQ",
            Op::IsZero => "ISZERO",
            Op::And => "AND",
            Op::Or => "OR",
            Op::Not => "NOT",
            Op::Address => "ADDRESS",
            Op::Balance => "BALANCE",
            Op::Caller => "CALLER",
            Op::CallValue => "CALLVALUE",
            Op::CallDataLoad => "CALLDATALOAD",
            Op::CallDataSize => "CALLDATASIZE",
            Op::BlockHash => "BLOCKHASH",
            Op::Timestamp => "TIMESTAMP",
            Op::Number => "NUMBER",
            Op::SelfBalance => "SELFBALANCE",
            Op::GasLeft => "GASLEFT",
            Op::MLoad => "MLOAD",
            Op::MStore => "MSTORE",
            Op::SLoad => "SLOAD",
            Op::SStore => "SSTORE",
            Op::Jump => "JUMP",
            Op::JumpI => "JUMPI",
            Op::JumpDest => "JUMPDEST",
            Op::Push => "PUSH",
            Op::Log2 => "LOG2",
            Op::Call => "CALL",
            Op::DelegateCall => "DELEGATECALL",
            Op::Transfer => "TRANSFER",
            Op::Return => "RETURN",
            Op::Revert => "REVERT",
            Op::Dup(_) | Op::Swap(_) => unreachable!(),
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<Op> {
        if let Some(n) = s.strip_prefix("DUP") {
            let n: u8 = n.parse().ok()?;
            return (1..=16).contains(&n).then_some(Op::Dup(n));
        }
        if let Some(n) = s.strip_prefix("SWAP") {
            let n: u8 = n.parse().ok()?;
            return (1..=16).contains(&n).then_some(Op::Swap(n));
        }
        Some(match s {
            "STOP" => Op::Stop,
            "ADD" => Op::Add,
            "MUL" => Op::Mul,
            "SUB" => Op::Sub,
            "DIV" => Op::Div,
            "MOD" => Op::Mod,
            "CADD" => Op::CAdd,
            "CSUB" => Op::CSub,
            "CMUL" => Op::CMul,
            "LT" => Op::Lt,
            "GT" => Op::Gt,
            "EQ" => Op::Eq,
            "ISZERO" => Op::IsZero,
            "AND" => Op::And,
            "OR" => Op::Or,
            "NOT" => Op::Not,
            "ADDRESS" => Op::Address,
            "BALANCE" => Op::Balance,
            "CALLER" => Op::Caller,
            "CALLVALUE" => Op::CallValue,
            "CALLDATALOAD" => Op::CallDataLoad,
            "CALLDATASIZE" => Op::CallDataSize,
            "BLOCKHASH" => Op::BlockHash,
            "TIMESTAMP" => Op::Timestamp,
            "NUMBER" => Op::Number,
            "SELFBALANCE" => Op::SelfBalance,
            "GASLEFT" => Op::GasLeft,
            "MLOAD" => Op::MLoad,
            "MSTORE" => Op::MStore,
            "SLOAD" => Op::SLoad,
            "SSTORE" => Op::SStore,
            "JUMP" => Op::Jump,
            "JUMPI" => Op::JumpI,
            "JUMPDEST" => Op::JumpDest,
            "PUSH" => Op::Push,
            "LOG2" => Op::Log2,
            "CALL" => Op::Call,
            "DELEGATECALL" => Op::DelegateCall,
            "TRANSFER" => Op::Transfer,
            "RETURN" => Op::Return,
            "REVERT" => Op::Revert,
            _ => return None,
        })
    }

    /// (values popped, values pushed).
    pub fn stack_effect(self) -> (usize, usize) {
        match self {
            Op::Stop | Op::JumpDest => (0, 0),
            Op::Add
            | Op::Mul
            | Op::Sub
            | Op::Div
            | Op::Mod
            | Op::CAdd
            | Op::CSub
            | Op::CMul
            | Op::Lt
            | Op::Gt
            | Op::Eq
            | Op::And
            | Op::Or => (2, 1),
            Op::IsZero | Op::Not | Op::Balance | Op::CallDataLoad | Op::BlockHash | Op::MLoad
            | Op::SLoad => (1, 1),
            Op::Address
            | Op::Caller
            | Op::CallValue
            | Op::CallDataSize
            | Op::Timestamp
            | Op::Number
            | Op::SelfBalance
            | Op::GasLeft
            | Op::Push => (0, 1),
            Op::MStore | Op::SStore | Op::Return | Op::Revert => (2, 0),
            Op::Jump => (1, 0),
            Op::JumpI => (2, 0),
            Op::Dup(n) => (n as usize, n as usize + 1),
            Op::Swap(n) => (n as usize + 1, n as usize + 1),
            Op::Log2 => (4, 0),
            Op::Call => (5, 1),
            Op::DelegateCall => (4, 1),
            Op::Transfer => (2, 1),
        }
    }

    /// Instructions that end a basic block.
    pub fn is_terminator(self) -> bool {
        matches!(
            self,
            Op::Stop | Op::Jump | Op::JumpI | Op::Return | Op::Revert
        )
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.mnemonic())
    }
}
