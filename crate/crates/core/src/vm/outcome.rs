//! Execution results and the per-instruction trace fed to the dynamic
//! detector.

use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::types::{Address, LogRecord};
use crate::word::Word256;

/// Reason a frame died abnormally (beyond revert/out-of-gas).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultKind {
    StackOverflow,
    StackUnderflow,
    InvalidJump,
    InvalidOpcode,
}

impl fmt::Display for FaultKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FaultKind::StackOverflow => "stack_overflow",
            FaultKind::StackUnderflow => "stack_underflow",
            FaultKind::InvalidJump => "invalid_jump",
            FaultKind::InvalidOpcode => "invalid_opcode",
        };
        f.write_str(s)
    }
}

/// Terminal status of one execution. Anything but `Success` rolls back every
/// journaled write of the frame and its children; gas consumption stands.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecStatus {
    Success,
    Revert,
    OutOfGas,
    Fault(FaultKind),
}

impl ExecStatus {
    pub fn is_success(&self) -> bool {
        matches!(self, ExecStatus::Success)
    }
}

impl fmt::Display for ExecStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExecStatus::Success => f.write_str("success"),
            ExecStatus::Revert => f.write_str("revert"),
            ExecStatus::OutOfGas => f.write_str("out_of_gas"),
            ExecStatus::Fault(kind) => write!(f, "fault({kind})"),
        }
    }
}

/// Facts about one executed instruction that the dynamic rules key on.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct TraceFlags {
    /// An ADD/SUB/MUL whose result actually wrapped.
    pub wrapped_arithmetic: bool,
    /// CALL, DELEGATECALL or TRANSFER.
    pub external_call: bool,
    /// An SSTORE that completed.
    pub storage_write: bool,
    /// BLOCKHASH.
    pub blockhash_read: bool,
}

mod stack_top_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        words: &Vec<Word256>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(words.len()))?;
        for w in words {
            seq.serialize_element(&w.to_hex_string())?;
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

/// One trace event per executed instruction. `stack_top` holds at most the
/// four topmost words (top first) as they were before the instruction ran;
/// `gas` is the gas remaining at fetch time.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceEvent {
    pub op: String,
    pub depth: u32,
    pub storage_addr: Address,
    #[serde(with = "stack_top_serde")]
    pub stack_top: Vec<Word256>,
    pub gas: u64,
    pub flags: TraceFlags,
}

/// The complete result of executing one frame tree.
#[derive(Clone, Debug)]
pub struct ExecOutcome {
    pub status: ExecStatus,
    pub return_data: Vec<u8>,
    pub gas_used: u64,
    pub logs: Vec<LogRecord>,
    pub trace: Vec<TraceEvent>,
}

#[derive(Debug, thiserror::Error)]
pub enum TraceIoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("trace line {line}: {source}")]
    Malformed {
        line: usize,
        source: serde_json::Error,
    },
}

/// Writes one JSON document per line: op, depth, storage_addr, stack_top,
/// gas, flags.
pub fn write_trace_jsonl<W: Write>(mut w: W, trace: &[TraceEvent]) -> Result<(), TraceIoError> {
    for event in trace {
        serde_json::to_writer(&mut w, event).map_err(|e| TraceIoError::Malformed {
            line: 0,
            source: e,
        })?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a JSON Lines trace, reporting the offending line on parse failure.
pub fn read_trace_jsonl<R: BufRead>(r: R) -> Result<Vec<TraceEvent>, TraceIoError> {
    let mut out = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let event =
            serde_json::from_str(&line).map_err(|e| TraceIoError::Malformed {
                line: idx + 1,
                source: e,
            })?;
        out.push(event);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_jsonl_round_trip_and_field_order() {
        let event = TraceEvent {
            op: "SSTORE".into(),
            depth: 2,
            storage_addr: Address([7; 20]),
            stack_top: vec![Word256::from_u64(1), Word256::from_u64(2)],
            gas: 777,
            flags: TraceFlags {
                storage_write: true,
                ..Default::default()
            },
        };
        let mut buf = Vec::new();
        write_trace_jsonl(&mut buf, std::slice::from_ref(&event)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let op_pos = text.find("\"op\"").unwrap();
        let depth_pos = text.find("\"depth\"").unwrap();
        let flags_pos = text.find("\"flags\"").unwrap();
        assert!(op_pos < depth_pos && depth_pos < flags_pos);
        let back = read_trace_jsonl(&buf[..]).unwrap();
        assert_eq!(back, vec![event]);
    }

    #[test]
    fn malformed_trace_line_is_reported_with_number() {
        let data = b"{\"op\":\"STOP\",\"depth\":0,\"storage_addr\":\"0x0000000000000000000000000000000000000000\",\"stack_top\":[],\"gas\":1,\"flags\":{\"wrapped_arithmetic\":false,\"external_call\":false,\"storage_write\":false,\"blockhash_read\":false}}\nnot json\n";
        match read_trace_jsonl(&data[..]) {
            Err(TraceIoError::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected malformed error, got {other:?}"),
        }
    }
}
