//! The gas-metered stack interpreter.
//!
//! Execution is strictly sequential; every state write goes through the
//! journal so any non-success status rolls the frame (and its children)
//! back. Gas consumption stands regardless of status.

use std::collections::HashSet;

use crate::asm::op::{Op, PUSH_ENCODED_LEN};
use crate::chain::BlockContext;
use crate::types::{Address, LogRecord, WorldState};
use crate::vm::frame::Frame;
use crate::vm::gas;
use crate::vm::journal::JournaledState;
use crate::vm::outcome::{ExecOutcome, ExecStatus, FaultKind, TraceEvent, TraceFlags};
use crate::word::Word256;

/// Why a frame stopped.
enum Halt {
    Stop,
    Return(Vec<u8>),
    Revert(Vec<u8>),
    OutOfGas,
    Fault(FaultKind),
}

enum Step {
    Next,
    Jump(usize),
    Halted(Halt),
}

struct FrameResult {
    status: ExecStatus,
    return_data: Vec<u8>,
    gas_left: u64,
}

enum CallKind {
    Call,
    DelegateCall,
    Transfer,
}

struct Interp<'a, 'b> {
    js: JournaledState<'a>,
    ctx: &'b BlockContext,
    trace: Vec<TraceEvent>,
}

/// Executes a prepared frame against the state. No value transfer happens at
/// entry; callers that need one use [`execute_message`] or [`execute_create`].
pub fn execute(state: &mut WorldState, frame: Frame, ctx: &BlockContext) -> ExecOutcome {
    let initial_gas = frame.gas;
    let mut interp = Interp {
        js: JournaledState::new(state),
        ctx,
        trace: Vec::new(),
    };
    let checkpoint = interp.js.checkpoint();
    let mut frame = frame;
    let result = interp.run_frame(&mut frame);
    if !result.status.is_success() {
        interp.js.revert_to(checkpoint);
    }
    finish(initial_gas, result, interp)
}

/// Top-level message call: moves `value`, then runs the code at `to` (if
/// any). This is the transaction-body half of `apply_transaction`.
pub fn execute_message(
    state: &mut WorldState,
    ctx: &BlockContext,
    caller: Address,
    to: Address,
    value: Word256,
    call_data: Vec<u8>,
    gas: u64,
) -> ExecOutcome {
    let mut interp = Interp {
        js: JournaledState::new(state),
        ctx,
        trace: Vec::new(),
    };
    let checkpoint = interp.js.checkpoint();
    if interp.js.transfer(0, caller, to, value).is_err() {
        return finish(
            gas,
            FrameResult {
                status: ExecStatus::Revert,
                return_data: Vec::new(),
                gas_left: gas,
            },
            interp,
        );
    }
    let code = interp.js.state.code(&to).to_vec();
    let result = if code.is_empty() {
        FrameResult {
            status: ExecStatus::Success,
            return_data: Vec::new(),
            gas_left: gas,
        }
    } else {
        let mut frame = Frame::top(to, caller, value, call_data, code, gas);
        interp.run_frame(&mut frame)
    };
    if !result.status.is_success() {
        interp.js.revert_to(checkpoint);
    }
    finish(gas, result, interp)
}

/// Contract creation body: reserves the new account (nonce 1), moves the
/// endowment, runs `init_code`, and installs its return data as the account
/// code. Everything reverts on failure.
pub fn execute_create(
    state: &mut WorldState,
    ctx: &BlockContext,
    caller: Address,
    new_addr: Address,
    value: Word256,
    init_code: Vec<u8>,
    gas: u64,
) -> ExecOutcome {
    let mut interp = Interp {
        js: JournaledState::new(state),
        ctx,
        trace: Vec::new(),
    };
    let checkpoint = interp.js.checkpoint();
    let occupied = {
        let existing = interp.js.state.account(&new_addr);
        existing.map(|a| a.nonce > 0 || !a.code.is_empty()).unwrap_or(false)
    };
    if occupied {
        return finish(
            gas,
            FrameResult {
                status: ExecStatus::Revert,
                return_data: Vec::new(),
                gas_left: gas,
            },
            interp,
        );
    }
    interp.js.set_nonce(0, new_addr, 1);
    if interp.js.transfer(0, caller, new_addr, value).is_err() {
        interp.js.revert_to(checkpoint);
        return finish(
            gas,
            FrameResult {
                status: ExecStatus::Revert,
                return_data: Vec::new(),
                gas_left: gas,
            },
            interp,
        );
    }
    let mut frame = Frame::top(new_addr, caller, value, Vec::new(), init_code, gas);
    let result = interp.run_frame(&mut frame);
    if result.status.is_success() {
        interp.js.set_code(0, new_addr, result.return_data.clone());
    } else {
        interp.js.revert_to(checkpoint);
    }
    finish(gas, result, interp)
}

fn finish(initial_gas: u64, result: FrameResult, interp: Interp<'_, '_>) -> ExecOutcome {
    ExecOutcome {
        status: result.status,
        return_data: result.return_data,
        gas_used: initial_gas - result.gas_left,
        logs: interp.js.logs.clone(),
        trace: interp.trace,
    }
}

/// Jump targets are JUMPDEST bytes at instruction boundaries only; bytes
/// inside PUSH immediates do not count.
fn scan_jumpdests(code: &[u8]) -> HashSet<usize> {
    let mut dests = HashSet::new();
    let mut pc = 0usize;
    while pc < code.len() {
        match code[pc] {
            b if b == Op::Push.byte() => pc += PUSH_ENCODED_LEN,
            b if b == Op::JumpDest.byte() => {
                dests.insert(pc);
                pc += 1;
            }
            _ => pc += 1,
        }
    }
    dests
}

fn charge(frame: &mut Frame, cost: u64) -> Result<(), Halt> {
    if cost > frame.gas {
        frame.gas = 0;
        return Err(Halt::OutOfGas);
    }
    frame.gas -= cost;
    Ok(())
}

fn pop(frame: &mut Frame) -> Result<Word256, Halt> {
    frame
        .stack
        .pop()
        .ok_or(Halt::Fault(FaultKind::StackUnderflow))
}

fn push(frame: &mut Frame, value: Word256) -> Result<(), Halt> {
    if frame.stack.len() >= gas::MAX_STACK {
        return Err(Halt::Fault(FaultKind::StackOverflow));
    }
    frame.stack.push(value);
    Ok(())
}

/// Grows memory to cover `[offset, offset+len)`, charging per new 32-byte
/// word, and returns the concrete offset. Zero-length accesses touch nothing.
fn expand_memory(frame: &mut Frame, offset: Word256, len: usize) -> Result<usize, Halt> {
    if len == 0 {
        return Ok(0);
    }
    let off = offset.to_u64_saturating() as u128;
    let end = off + len as u128;
    let new_words = end.div_ceil(32);
    let cur_words = (frame.memory.len() / 32) as u128;
    if new_words > cur_words {
        let cost = (new_words - cur_words) * gas::MEMORY_PER_WORD as u128;
        if cost > frame.gas as u128 {
            frame.gas = 0;
            return Err(Halt::OutOfGas);
        }
        frame.gas -= cost as u64;
        frame.memory.resize(new_words as usize * 32, 0);
    }
    Ok(off as usize)
}

fn mem_read(frame: &mut Frame, offset: Word256, len: usize) -> Result<Vec<u8>, Halt> {
    let off = expand_memory(frame, offset, len)?;
    Ok(frame.memory[off..off + len].to_vec())
}

impl Interp<'_, '_> {
    fn run_frame(&mut self, frame: &mut Frame) -> FrameResult {
        let jumpdests = scan_jumpdests(&frame.code);
        let mut pc = 0usize;
        let halt = loop {
            if pc >= frame.code.len() {
                break Halt::Stop;
            }
            let byte = frame.code[pc];
            let op = Op::from_byte(byte);
            let mnemonic = op
                .map(|o| o.mnemonic())
                .unwrap_or_else(|| format!("INVALID(0x{byte:02x})"));
            let event_idx = self.trace.len();
            self.trace.push(TraceEvent {
                op: mnemonic,
                depth: frame.depth,
                storage_addr: frame.storage_addr,
                stack_top: frame.stack.iter().rev().take(4).copied().collect(),
                gas: frame.gas,
                flags: TraceFlags::default(),
            });
            let op = match op {
                Some(op) => op,
                None => break Halt::Fault(FaultKind::InvalidOpcode),
            };
            let mut flags = TraceFlags::default();
            match self.step(frame, op, pc, &jumpdests, &mut flags) {
                Ok(Step::Next) => {
                    pc += if op == Op::Push { PUSH_ENCODED_LEN } else { 1 };
                }
                Ok(Step::Jump(dest)) => pc = dest,
                Ok(Step::Halted(halt)) | Err(halt) => {
                    self.trace[event_idx].flags = flags;
                    break halt;
                }
            }
            self.trace[event_idx].flags = flags;
        };
        match halt {
            Halt::Stop => FrameResult {
                status: ExecStatus::Success,
                return_data: Vec::new(),
                gas_left: frame.gas,
            },
            Halt::Return(data) => FrameResult {
                status: ExecStatus::Success,
                return_data: data,
                gas_left: frame.gas,
            },
            Halt::Revert(data) => FrameResult {
                status: ExecStatus::Revert,
                return_data: data,
                gas_left: frame.gas,
            },
            Halt::OutOfGas => FrameResult {
                status: ExecStatus::OutOfGas,
                return_data: Vec::new(),
                gas_left: 0,
            },
            Halt::Fault(kind) => FrameResult {
                status: ExecStatus::Fault(kind),
                return_data: Vec::new(),
                gas_left: 0,
            },
        }
    }

    fn step(
        &mut self,
        frame: &mut Frame,
        op: Op,
        pc: usize,
        jumpdests: &HashSet<usize>,
        flags: &mut TraceFlags,
    ) -> Result<Step, Halt> {
        match op {
            Op::Stop => {
                charge(frame, gas::BASE)?;
                return Ok(Step::Halted(Halt::Stop));
            }
            Op::SStore => return self.op_sstore(frame, flags).map(|()| Step::Next),
            Op::SLoad => {
                charge(frame, gas::SLOAD)?;
                let key = pop(frame)?;
                let value = self.js.state.storage(&frame.storage_addr, &key);
                push(frame, value)?;
                return Ok(Step::Next);
            }
            Op::Call | Op::DelegateCall | Op::Transfer => {
                flags.external_call = true;
                let kind = match op {
                    Op::Call => CallKind::Call,
                    Op::DelegateCall => CallKind::DelegateCall,
                    _ => CallKind::Transfer,
                };
                return self.op_external_call(frame, kind).map(|()| Step::Next);
            }
            Op::Log2 => return self.op_log2(frame).map(|()| Step::Next),
            _ => {}
        }

        charge(frame, gas::BASE)?;
        match op {
            Op::Add | Op::Sub | Op::Mul => {
                let a = pop(frame)?;
                let b = pop(frame)?;
                let (value, wrapped) = match op {
                    Op::Add => a.overflowing_add(b),
                    Op::Sub => a.overflowing_sub(b),
                    _ => a.overflowing_mul(b),
                };
                flags.wrapped_arithmetic = wrapped;
                push(frame, value)?;
            }
            Op::Div => {
                let a = pop(frame)?;
                let b = pop(frame)?;
                push(frame, a.wrapping_div(b))?;
            }
            Op::Mod => {
                let a = pop(frame)?;
                let b = pop(frame)?;
                push(frame, a.wrapping_rem(b))?;
            }
            Op::CAdd | Op::CSub | Op::CMul => {
                let a = pop(frame)?;
                let b = pop(frame)?;
                let value = match op {
                    Op::CAdd => a.checked_add(b),
                    Op::CSub => a.checked_sub(b),
                    _ => a.checked_mul(b),
                };
                match value {
                    Ok(v) => push(frame, v)?,
                    // Overflow reverts the frame unless an outer contract
                    // handles the failed call.
                    Err(_) => return Ok(Step::Halted(Halt::Revert(Vec::new()))),
                }
            }
            Op::Lt => {
                let a = pop(frame)?;
                let b = pop(frame)?;
                push(frame, Word256::from_bool(a < b))?;
            }
            Op::Gt => {
                let a = pop(frame)?;
                let b = pop(frame)?;
                push(frame, Word256::from_bool(a > b))?;
            }
            Op::Eq => {
                let a = pop(frame)?;
                let b = pop(frame)?;
                push(frame, Word256::from_bool(a == b))?;
            }
            Op::IsZero => {
                let a = pop(frame)?;
                push(frame, Word256::from_bool(a.is_zero()))?;
            }
            Op::And => {
                let a = pop(frame)?;
                let b = pop(frame)?;
                push(frame, a & b)?;
            }
            Op::Or => {
                let a = pop(frame)?;
                let b = pop(frame)?;
                push(frame, a | b)?;
            }
            Op::Not => {
                let a = pop(frame)?;
                push(frame, !a)?;
            }
            Op::Address => push(frame, frame.storage_addr.to_word())?,
            Op::Balance => {
                let w = pop(frame)?;
                let addr = Address::from_word(w);
                push(frame, self.js.state.balance(&addr))?;
            }
            Op::Caller => push(frame, frame.caller.to_word())?,
            Op::CallValue => push(frame, frame.call_value)?,
            Op::CallDataLoad => {
                let offset = pop(frame)?.to_usize_saturating();
                let mut buf = [0u8; 32];
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = offset
                        .checked_add(i)
                        .and_then(|pos| frame.call_data.get(pos))
                        .copied()
                        .unwrap_or(0);
                }
                push(frame, Word256::from_be_bytes(buf))?;
            }
            Op::CallDataSize => push(frame, Word256::from_u64(frame.call_data.len() as u64))?,
            Op::BlockHash => {
                flags.blockhash_read = true;
                let n = pop(frame)?.to_u64_saturating();
                push(frame, self.ctx.blockhash(n))?;
            }
            Op::Timestamp => push(frame, Word256::from_u64(self.ctx.timestamp))?,
            Op::Number => push(frame, Word256::from_u64(self.ctx.number))?,
            Op::SelfBalance => push(frame, self.js.state.balance(&frame.storage_addr))?,
            Op::GasLeft => push(frame, Word256::from_u64(frame.gas))?,
            Op::MLoad => {
                let offset = pop(frame)?;
                let bytes = mem_read(frame, offset, 32)?;
                push(frame, Word256::from_be_slice(&bytes))?;
            }
            Op::MStore => {
                let offset = pop(frame)?;
                let value = pop(frame)?;
                let off = expand_memory(frame, offset, 32)?;
                frame.memory[off..off + 32].copy_from_slice(&value.to_be_bytes());
            }
            Op::Jump => {
                let dest = pop(frame)?.to_usize_saturating();
                if !jumpdests.contains(&dest) {
                    return Err(Halt::Fault(FaultKind::InvalidJump));
                }
                return Ok(Step::Jump(dest));
            }
            Op::JumpI => {
                let dest = pop(frame)?.to_usize_saturating();
                let cond = pop(frame)?;
                if !cond.is_zero() {
                    if !jumpdests.contains(&dest) {
                        return Err(Halt::Fault(FaultKind::InvalidJump));
                    }
                    return Ok(Step::Jump(dest));
                }
            }
            Op::JumpDest => {}
            Op::Push => {
                if pc + PUSH_ENCODED_LEN > frame.code.len() {
                    return Err(Halt::Fault(FaultKind::InvalidOpcode));
                }
                let mut buf = [0u8; 32];
                buf.copy_from_slice(&frame.code[pc + 1..pc + 33]);
                push(frame, Word256::from_be_bytes(buf))?;
            }
            Op::Dup(n) => {
                let n = n as usize;
                if frame.stack.len() < n {
                    return Err(Halt::Fault(FaultKind::StackUnderflow));
                }
                let value = frame.stack[frame.stack.len() - n];
                push(frame, value)?;
            }
            Op::Swap(n) => {
                let n = n as usize;
                if frame.stack.len() < n + 1 {
                    return Err(Halt::Fault(FaultKind::StackUnderflow));
                }
                let top = frame.stack.len() - 1;
                frame.stack.swap(top, top - n);
            }
            Op::Return => {
                let offset = pop(frame)?;
                let len = pop(frame)?.to_usize_saturating();
                let data = mem_read(frame, offset, len)?;
                return Ok(Step::Halted(Halt::Return(data)));
            }
            Op::Revert => {
                let offset = pop(frame)?;
                let len = pop(frame)?.to_usize_saturating();
                let data = mem_read(frame, offset, len)?;
                return Ok(Step::Halted(Halt::Revert(data)));
            }
            Op::Stop
            | Op::SLoad
            | Op::SStore
            | Op::Call
            | Op::DelegateCall
            | Op::Transfer
            | Op::Log2 => unreachable!("handled above"),
        }
        Ok(Step::Next)
    }

    fn op_sstore(&mut self, frame: &mut Frame, flags: &mut TraceFlags) -> Result<(), Halt> {
        // Stipend sentry: a frame running on at most the 2300-gas transfer
        // stipend can never complete a storage write.
        if frame.gas <= gas::SSTORE_SENTRY {
            frame.gas = 0;
            return Err(Halt::OutOfGas);
        }
        let key = pop(frame)?;
        let value = pop(frame)?;
        let current = self.js.state.storage(&frame.storage_addr, &key);
        let cost = if current.is_zero() {
            gas::SSTORE_SET
        } else {
            gas::SSTORE_UPDATE
        };
        charge(frame, cost)?;
        self.js
            .set_storage(frame.depth, frame.storage_addr, key, value);
        flags.storage_write = true;
        Ok(())
    }

    fn op_log2(&mut self, frame: &mut Frame) -> Result<(), Halt> {
        let offset = pop(frame)?;
        let len = pop(frame)?.to_usize_saturating();
        let topic1 = pop(frame)?;
        let topic2 = pop(frame)?;
        let cost = gas::LOG_BASE.saturating_add(gas::LOG_PER_BYTE.saturating_mul(len as u64));
        charge(frame, cost)?;
        let data = mem_read(frame, offset, len)?;
        self.js.emit_log(
            frame.depth,
            LogRecord {
                address: frame.storage_addr,
                topics: vec![topic1, topic2],
                data,
            },
        );
        Ok(())
    }

    /// CALL/DELEGATECALL/TRANSFER. The child's status lands on the parent's
    /// stack as 1/0; a failed child is fully rolled back, and unused child
    /// gas returns to the parent.
    fn op_external_call(&mut self, frame: &mut Frame, kind: CallKind) -> Result<(), Halt> {
        charge(frame, gas::CALL_BASE)?;
        let (gas_requested, target_word, value, arg_data) = match kind {
            CallKind::Call => {
                let gas_w = pop(frame)?;
                let to = pop(frame)?;
                let value = pop(frame)?;
                let in_off = pop(frame)?;
                let in_len = pop(frame)?.to_usize_saturating();
                let data = mem_read(frame, in_off, in_len)?;
                (Some(gas_w.to_u64_saturating()), to, value, data)
            }
            CallKind::DelegateCall => {
                let gas_w = pop(frame)?;
                let to = pop(frame)?;
                let in_off = pop(frame)?;
                let in_len = pop(frame)?.to_usize_saturating();
                let data = mem_read(frame, in_off, in_len)?;
                (Some(gas_w.to_u64_saturating()), to, Word256::ZERO, data)
            }
            CallKind::Transfer => {
                let to = pop(frame)?;
                let value = pop(frame)?;
                (None, to, value, Vec::new())
            }
        };
        let target = Address::from_word(target_word);

        // Gas offered to the child: capped at "all but reserve" for CALL and
        // DELEGATECALL, fixed at the stipend for TRANSFER.
        let child_gas = match gas_requested {
            Some(requested) => requested.min(frame.gas.saturating_sub(gas::CALL_BASE)),
            None => {
                if frame.gas < gas::TRANSFER_STIPEND {
                    frame.gas = 0;
                    return Err(Halt::OutOfGas);
                }
                gas::TRANSFER_STIPEND
            }
        };
        frame.gas -= child_gas;

        if frame.depth + 1 >= gas::MAX_CALL_DEPTH {
            frame.gas += child_gas;
            return push(frame, Word256::ZERO);
        }

        let checkpoint = self.js.checkpoint();
        let child_depth = frame.depth + 1;

        let transfers_value = !matches!(kind, CallKind::DelegateCall);
        if transfers_value
            && self
                .js
                .transfer(child_depth, frame.storage_addr, target, value)
                .is_err()
        {
            frame.gas += child_gas;
            return push(frame, Word256::ZERO);
        }

        let code = self.js.state.code(&target).to_vec();
        let result = if code.is_empty() {
            FrameResult {
                status: ExecStatus::Success,
                return_data: Vec::new(),
                gas_left: child_gas,
            }
        } else {
            let mut child = match kind {
                CallKind::Call | CallKind::Transfer => Frame {
                    code_addr: target,
                    storage_addr: target,
                    caller: frame.storage_addr,
                    call_value: value,
                    call_data: arg_data,
                    code,
                    stack: Vec::new(),
                    memory: Vec::new(),
                    gas: child_gas,
                    depth: child_depth,
                },
                CallKind::DelegateCall => Frame {
                    code_addr: target,
                    storage_addr: frame.storage_addr,
                    caller: frame.caller,
                    call_value: frame.call_value,
                    call_data: arg_data,
                    code,
                    stack: Vec::new(),
                    memory: Vec::new(),
                    gas: child_gas,
                    depth: child_depth,
                },
            };
            self.run_frame(&mut child)
        };

        frame.gas += result.gas_left;
        if result.status.is_success() {
            push(frame, Word256::ONE)
        } else {
            self.js.revert_to(checkpoint);
            push(frame, Word256::ZERO)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asm::assemble;
    use crate::merkle::state_root;

    fn ctx() -> BlockContext {
        BlockContext::zero()
    }

    fn addr(b: u8) -> Address {
        Address([b; 20])
    }

    fn run_code(source: &str, gas: u64) -> (WorldState, ExecOutcome) {
        let code = assemble(source).unwrap().0;
        let mut state = WorldState::new();
        state.account_mut(addr(0xAA)).code = code.clone();
        let frame = Frame::top(addr(0xAA), addr(1), Word256::ZERO, Vec::new(), code, gas);
        let outcome = execute(&mut state, frame, &ctx());
        (state, outcome)
    }

    fn baseline_state(source: &str) -> WorldState {
        let code = assemble(source).unwrap().0;
        let mut state = WorldState::new();
        state.account_mut(addr(0xAA)).code = code;
        state
    }

    #[test]
    fn add_program_uses_four_base_charges() {
        let (_, outcome) = run_code("PUSH 1\nPUSH 2\nADD\nSTOP", 100);
        assert_eq!(outcome.status, ExecStatus::Success);
        assert_eq!(outcome.gas_used, 4 * gas::BASE);
        assert_eq!(outcome.trace.len(), 4);
        // The STOP event snapshots the stack after ADD: top must be 3.
        assert_eq!(outcome.trace[3].stack_top, vec![Word256::from_u64(3)]);
    }

    #[test]
    fn sstore_then_revert_leaves_storage_unchanged() {
        let src = "PUSH 7\nPUSH 1\nSSTORE\nPUSH 0\nPUSH 0\nREVERT";
        let (state, outcome) = run_code(src, 100_000);
        assert_eq!(outcome.status, ExecStatus::Revert);
        assert_eq!(
            state.storage(&addr(0xAA), &Word256::ONE),
            Word256::ZERO
        );
        assert_eq!(state_root(&state), state_root(&baseline_state(src)));
    }

    #[test]
    fn stack_overflow_at_push_1025() {
        let source = "PUSH 1\n".repeat(1025);
        let (_, outcome) = run_code(&source, 10_000_000);
        assert_eq!(
            outcome.status,
            ExecStatus::Fault(FaultKind::StackOverflow)
        );
        assert_eq!(outcome.trace.len(), 1025);
    }

    #[test]
    fn stack_of_1024_is_fine() {
        let source = "PUSH 1\n".repeat(1024) + "STOP";
        let (_, outcome) = run_code(&source, 10_000_000);
        assert_eq!(outcome.status, ExecStatus::Success);
    }

    #[test]
    fn gas_is_strictly_decreasing_within_a_frame() {
        let src = "PUSH 5\nPUSH 1\nSSTORE\nPUSH 0\nSLOAD\nSTOP";
        let (_, outcome) = run_code(src, 100_000);
        assert_eq!(outcome.status, ExecStatus::Success);
        for pair in outcome.trace.windows(2) {
            assert!(pair[1].gas < pair[0].gas);
        }
    }

    #[test]
    fn invalid_jump_faults() {
        let (_, outcome) = run_code("PUSH 3\nJUMP", 1000);
        assert_eq!(outcome.status, ExecStatus::Fault(FaultKind::InvalidJump));
    }

    #[test]
    fn jump_into_push_immediate_is_invalid() {
        // Offset 1 is inside the PUSH immediate even if it holds 0x5b.
        let src = format!("PUSH 0x{}\nPUSH 1\nJUMP", "5b".repeat(32));
        let (_, outcome) = run_code(&src, 1000);
        assert_eq!(outcome.status, ExecStatus::Fault(FaultKind::InvalidJump));
    }

    #[test]
    fn checked_overflow_reverts_frame() {
        let src = format!("PUSH 0x{}\nPUSH 2\nCMUL\nSTOP", format!("8{}", "0".repeat(63)));
        let (_, outcome) = run_code(&src, 1000);
        assert_eq!(outcome.status, ExecStatus::Revert);
    }

    #[test]
    fn out_of_gas_consumes_everything() {
        let (_, outcome) = run_code("PUSH 1\nPUSH 2\nADD\nSTOP", 7);
        assert_eq!(outcome.status, ExecStatus::OutOfGas);
        assert_eq!(outcome.gas_used, 7);
    }

    #[test]
    fn sstore_under_stipend_is_out_of_gas() {
        let src = "PUSH 7\nPUSH 1\nSSTORE\nSTOP";
        let (state, outcome) = run_code(src, 2300);
        assert_eq!(outcome.status, ExecStatus::OutOfGas);
        assert!(!outcome.trace.iter().any(|e| e.flags.storage_write));
        assert_eq!(state.storage(&addr(0xAA), &Word256::ONE), Word256::ZERO);
    }

    #[test]
    fn calldataload_past_end_reads_zero() {
        let code = assemble("PUSH 100\nCALLDATALOAD\nPUSH 0\nMSTORE\nPUSH 32\nPUSH 0\nRETURN")
            .unwrap()
            .0;
        let mut state = WorldState::new();
        let frame = Frame::top(
            addr(0xAA),
            addr(1),
            Word256::ZERO,
            vec![1, 2, 3],
            code,
            100_000,
        );
        let outcome = execute(&mut state, frame, &ctx());
        assert_eq!(outcome.status, ExecStatus::Success);
        assert_eq!(outcome.return_data, vec![0u8; 32]);
    }

    #[test]
    fn huge_memory_offset_runs_out_of_gas_without_allocating() {
        let src = "PUSH 5\nPUSH 0xffffffffffffffffffffffff\nMSTORE\nSTOP";
        let (_, outcome) = run_code(src, 100_000);
        assert_eq!(outcome.status, ExecStatus::OutOfGas);
    }

    #[test]
    fn message_call_to_empty_code_moves_value() {
        let mut state = WorldState::new();
        state.account_mut(addr(1)).balance = Word256::from_u64(10);
        let outcome = execute_message(
            &mut state,
            &ctx(),
            addr(1),
            addr(2),
            Word256::from_u64(5),
            Vec::new(),
            50_000,
        );
        assert_eq!(outcome.status, ExecStatus::Success);
        assert_eq!(state.balance(&addr(1)), Word256::from_u64(5));
        assert_eq!(state.balance(&addr(2)), Word256::from_u64(5));
    }

    #[test]
    fn deterministic_traces() {
        let src = "PUSH 3\nPUSH 4\nMUL\nPUSH 0\nSSTORE\nSTOP";
        let (_, a) = run_code(src, 100_000);
        let (_, b) = run_code(src, 100_000);
        assert_eq!(a.trace, b.trace);
    }
}
