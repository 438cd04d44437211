//! Init-code builders. A creation transaction's payload runs once and its
//! RETURN data becomes the contract's code, so deployment wraps the
//! assembled runtime in a generated prologue that (a) runs constructor
//! stores and (b) copies the runtime into memory and returns it.
//!
//! Two constructor conventions exist, selected by a pragma comment in the
//! fixture source:
//!   * default: `--args w1,w2,..` are stored to slots 0,1,..
//!   * `# ctor: erc20`: arg0 is the supply; slot 0 and the deployer's
//!     balance slot are set and a Transfer log from the zero address fires.

use crate::asm::{assemble, AsmError, Bytecode, Op};
use crate::types::Address;
use crate::word::Word256;

use super::layout::balance_slot;

fn push_word(out: &mut Vec<u8>, w: Word256) {
    out.push(Op::Push.byte());
    out.extend_from_slice(&w.to_be_bytes());
}

/// Stores `args[i]` into storage slot `i`.
pub fn ctor_store_args(args: &[Word256]) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, arg) in args.iter().enumerate() {
        push_word(&mut out, *arg);
        push_word(&mut out, Word256::from_u64(i as u64));
        out.push(Op::SStore.byte());
    }
    out
}

/// ERC-20 constructor: totalSupply to slot 0, the whole supply to the
/// deployer's balance slot, and a Transfer(0 -> deployer, supply) log.
pub fn ctor_erc20(deployer: &Address, supply: Word256) -> Vec<u8> {
    let mut out = Vec::new();
    push_word(&mut out, supply);
    push_word(&mut out, Word256::ZERO);
    out.push(Op::SStore.byte());
    push_word(&mut out, supply);
    push_word(&mut out, balance_slot(deployer));
    out.push(Op::SStore.byte());
    // Log data: the amount, staged at memory 0.
    push_word(&mut out, supply);
    push_word(&mut out, Word256::ZERO);
    out.push(Op::MStore.byte());
    // LOG2 pops offset, size, topic1 (from), topic2 (to).
    push_word(&mut out, deployer.to_word());
    push_word(&mut out, Word256::ZERO);
    push_word(&mut out, Word256::from_u64(32));
    push_word(&mut out, Word256::ZERO);
    out.push(Op::Log2.byte());
    out
}

/// A (possibly short) code chunk as the word MSTORE writes: left-aligned,
/// zero-padded on the right. RETURN's exact length drops the padding.
fn chunk_word(chunk: &[u8]) -> Word256 {
    let mut buf = [0u8; 32];
    buf[..chunk.len()].copy_from_slice(chunk);
    Word256::from_be_bytes(buf)
}

/// Writes `runtime` into memory 32 bytes at a time and returns exactly its
/// length.
pub fn emit_runtime(runtime: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, chunk) in runtime.chunks(32).enumerate() {
        push_word(&mut out, chunk_word(chunk));
        push_word(&mut out, Word256::from_u64(32 * i as u64));
        out.push(Op::MStore.byte());
    }
    push_word(&mut out, Word256::from_u64(runtime.len() as u64));
    push_word(&mut out, Word256::ZERO);
    out.push(Op::Return.byte());
    out
}

pub fn wrap_init(ctor: &[u8], runtime: &[u8]) -> Bytecode {
    let mut out = ctor.to_vec();
    out.extend_from_slice(&emit_runtime(runtime));
    Bytecode(out)
}

/// `# ctor: <name>` pragma in fixture source, if any.
pub fn ctor_pragma(source: &str) -> Option<&str> {
    for line in source.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("# ctor:") {
            return Some(rest.trim());
        }
    }
    None
}

#[derive(Debug, thiserror::Error)]
pub enum DeployError {
    #[error(transparent)]
    Asm(#[from] AsmError),
    #[error("unknown ctor pragma '{0}'")]
    UnknownCtor(String),
}

/// Assembles fixture source and wraps it into init code using the source's
/// constructor convention.
pub fn init_code(
    source: &str,
    deployer: &Address,
    args: &[Word256],
) -> Result<Bytecode, DeployError> {
    let runtime = assemble(source)?;
    let ctor = match ctor_pragma(source) {
        Some("erc20") => {
            let supply = args.first().copied().unwrap_or(Word256::ZERO);
            ctor_erc20(deployer, supply)
        }
        Some(other) => return Err(DeployError::UnknownCtor(other.to_string())),
        None => ctor_store_args(args),
    };
    Ok(wrap_init(&ctor, &runtime.0))
}
