//! Text assembler and disassembler. Every contract fixture in the repository
//! is authored in this format (".mvm": one statement per line, `#` comments,
//! optional `label:` prefixes, `PUSHL label` to push a code offset).

pub mod op;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use op::Op;

use crate::word::Word256;

/// Assembled bytecode.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Bytecode(#[serde(with = "crate::hash::hex_bytes")] pub Vec<u8>);

impl Bytecode {
    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_hex(&self) -> String {
        crate::hash::bytes_to_hex(&self.0)
    }
}

impl fmt::Debug for Bytecode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bytecode({})", self.to_hex())
    }
}

impl From<Vec<u8>> for Bytecode {
    fn from(v: Vec<u8>) -> Self {
        Bytecode(v)
    }
}

/// One parsed statement.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instruction {
    pub op: Op,
    /// Immediate; only PUSH carries one.
    pub imm: Option<Word256>,
    /// Label defined at this instruction, if any.
    pub label: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Item {
    Ins(Instruction),
    /// PUSH whose immediate is a label reference, resolved to a byte offset.
    PushLabel { name: String, label: Option<String> },
    /// Raw bytes (`DATA 0x..`).
    Data { bytes: Vec<u8>, label: Option<String> },
}

/// A parsed program: ordered instructions plus the label table.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Program {
    pub instructions: Vec<Instruction>,
    pub labels: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AsmErrorKind {
    UnknownMnemonic(String),
    UnresolvedLabel(String),
    DuplicateLabel(String),
    ImmediateOutOfRange(String),
    MissingImmediate,
    UnexpectedImmediate,
    BadLabelName(String),
    DanglingLabel(String),
    TargetNotJumpDest(String),
    ExtraToken(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind:?}")]
pub struct AsmError {
    pub line: usize,
    pub kind: AsmErrorKind,
}

fn err(line: usize, kind: AsmErrorKind) -> AsmError {
    AsmError { line, kind }
}

fn is_label_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().unwrap().is_ascii_alphabetic()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_items(source: &str) -> Result<(Vec<Item>, BTreeMap<String, usize>), AsmError> {
    let mut items = Vec::new();
    let mut labels: BTreeMap<String, usize> = BTreeMap::new();
    let mut pending_label: Option<(String, usize)> = None;

    for (idx, raw_line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let mut tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }

        let mut label_here: Option<String> = pending_label.take().map(|(name, _)| name);
        if let Some(first) = tokens.first() {
            if let Some(name) = first.strip_suffix(':') {
                if !is_label_name(name) {
                    return Err(err(line_no, AsmErrorKind::BadLabelName(name.to_string())));
                }
                if labels.contains_key(name) {
                    return Err(err(line_no, AsmErrorKind::DuplicateLabel(name.to_string())));
                }
                // Several labels may name one instruction; the first is kept
                // for display, all land in the table.
                labels.insert(name.to_string(), items.len());
                if label_here.is_none() {
                    label_here = Some(name.to_string());
                }
                tokens.remove(0);
            }
        }

        if tokens.is_empty() {
            if let Some(name) = label_here {
                pending_label = Some((name, line_no));
            }
            continue;
        }

        let mnemonic = tokens[0];
        let operand = tokens.get(1).copied();
        if tokens.len() > 2 {
            return Err(err(line_no, AsmErrorKind::ExtraToken(tokens[2].to_string())));
        }

        let item = match mnemonic {
            "PUSHL" => {
                let name = operand
                    .ok_or_else(|| err(line_no, AsmErrorKind::MissingImmediate))?
                    .to_string();
                if !is_label_name(&name) {
                    return Err(err(line_no, AsmErrorKind::BadLabelName(name)));
                }
                Item::PushLabel {
                    name,
                    label: label_here.take(),
                }
            }
            "DATA" => {
                let text = operand.ok_or_else(|| err(line_no, AsmErrorKind::MissingImmediate))?;
                let bytes = crate::hash::parse_hex_bytes(text).map_err(|_| {
                    err(line_no, AsmErrorKind::ImmediateOutOfRange(text.to_string()))
                })?;
                Item::Data {
                    bytes,
                    label: label_here.take(),
                }
            }
            _ => {
                let op = Op::from_mnemonic(mnemonic).ok_or_else(|| {
                    err(line_no, AsmErrorKind::UnknownMnemonic(mnemonic.to_string()))
                })?;
                let imm = match (op, operand) {
                    (Op::Push, Some(text)) => Some(Word256::parse(text).map_err(|_| {
                        err(line_no, AsmErrorKind::ImmediateOutOfRange(text.to_string()))
                    })?),
                    (Op::Push, None) => {
                        return Err(err(line_no, AsmErrorKind::MissingImmediate))
                    }
                    (_, Some(_)) => {
                        return Err(err(line_no, AsmErrorKind::UnexpectedImmediate))
                    }
                    (_, None) => None,
                };
                Item::Ins(Instruction {
                    op,
                    imm,
                    label: label_here.take(),
                })
            }
        };
        items.push(item);
    }

    if let Some((name, line_no)) = pending_label {
        return Err(err(line_no, AsmErrorKind::DanglingLabel(name)));
    }
    Ok((items, labels))
}

fn item_len(item: &Item) -> usize {
    match item {
        Item::Ins(ins) if ins.op == Op::Push => op::PUSH_ENCODED_LEN,
        Item::Ins(_) => 1,
        Item::PushLabel { .. } => op::PUSH_ENCODED_LEN,
        Item::Data { bytes, .. } => bytes.len(),
    }
}

/// Assembles source text to bytecode. Label references (`PUSHL`) resolve to
/// byte offsets and must point at a JUMPDEST.
pub fn assemble(source: &str) -> Result<Bytecode, AsmError> {
    let (items, labels) = parse_items(source)?;

    let mut offsets = Vec::with_capacity(items.len());
    let mut pos = 0usize;
    for item in &items {
        offsets.push(pos);
        pos += item_len(item);
    }

    let mut out = Vec::with_capacity(pos);
    for item in &items {
        match item {
            Item::Ins(ins) => {
                out.push(ins.op.byte());
                if ins.op == Op::Push {
                    out.extend_from_slice(&ins.imm.unwrap_or(Word256::ZERO).to_be_bytes());
                }
            }
            Item::PushLabel { name, .. } => {
                let idx = *labels
                    .get(name)
                    .ok_or_else(|| err(0, AsmErrorKind::UnresolvedLabel(name.clone())))?;
                let target_ok = matches!(
                    items.get(idx),
                    Some(Item::Ins(Instruction {
                        op: Op::JumpDest,
                        ..
                    }))
                );
                if !target_ok {
                    return Err(err(0, AsmErrorKind::TargetNotJumpDest(name.clone())));
                }
                out.push(Op::Push.byte());
                out.extend_from_slice(&Word256::from_u64(offsets[idx] as u64).to_be_bytes());
            }
            Item::Data { bytes, .. } => out.extend_from_slice(bytes),
        }
    }
    Ok(Bytecode(out))
}

/// Parses source into a [`Program`] without emitting bytes. Label indices
/// refer to instruction positions; DATA items are rejected here.
pub fn parse_program(source: &str) -> Result<Program, AsmError> {
    let (items, labels) = parse_items(source)?;
    let mut instructions = Vec::with_capacity(items.len());
    for item in items {
        match item {
            Item::Ins(ins) => instructions.push(ins),
            Item::PushLabel { name, label } => instructions.push(Instruction {
                op: Op::Push,
                imm: labels.get(&name).map(|i| Word256::from_u64(*i as u64)),
                label,
            }),
            Item::Data { .. } => instructions.push(Instruction {
                op: Op::Stop,
                imm: None,
                label: None,
            }),
        }
    }
    Ok(Program {
        instructions,
        labels,
    })
}

/// One decoded unit of bytecode.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Decoded {
    Instr {
        offset: usize,
        op: Op,
        imm: Option<Word256>,
    },
    /// Bytes that do not decode: unknown opcodes or a truncated PUSH tail.
    Data { offset: usize, bytes: Vec<u8> },
}

impl Decoded {
    pub fn offset(&self) -> usize {
        match self {
            Decoded::Instr { offset, .. } | Decoded::Data { offset, .. } => *offset,
        }
    }
}

/// Linear-sweep decoder. A truncated PUSH immediate turns the remaining tail
/// into a single DATA unit; an unknown byte becomes a one-byte DATA unit.
pub fn decode(code: &[u8]) -> Vec<Decoded> {
    let mut out = Vec::new();
    let mut pc = 0usize;
    while pc < code.len() {
        match Op::from_byte(code[pc]) {
            Some(Op::Push) => {
                if pc + op::PUSH_ENCODED_LEN <= code.len() {
                    let mut buf = [0u8; 32];
                    buf.copy_from_slice(&code[pc + 1..pc + 33]);
                    out.push(Decoded::Instr {
                        offset: pc,
                        op: Op::Push,
                        imm: Some(Word256::from_be_bytes(buf)),
                    });
                    pc += op::PUSH_ENCODED_LEN;
                } else {
                    out.push(Decoded::Data {
                        offset: pc,
                        bytes: code[pc..].to_vec(),
                    });
                    break;
                }
            }
            Some(op) => {
                out.push(Decoded::Instr {
                    offset: pc,
                    op,
                    imm: None,
                });
                pc += 1;
            }
            None => {
                out.push(Decoded::Data {
                    offset: pc,
                    bytes: vec![code[pc]],
                });
                pc += 1;
            }
        }
    }
    out
}

fn format_imm(w: &Word256) -> String {
    let hex = w.to_hex_string();
    let trimmed = hex.trim_start_matches("0x").trim_start_matches('0');
    if trimmed.is_empty() {
        "0x0".to_string()
    } else {
        format!("0x{trimmed}")
    }
}

/// Best-effort disassembly; re-assembling the output reproduces the input
/// bytes exactly. JUMPDESTs get synthetic `L<offset>` labels.
pub fn disassemble(code: &[u8]) -> String {
    let units = decode(code);
    let mut out = String::new();
    for unit in &units {
        match unit {
            Decoded::Instr { offset, op, imm } => {
                if *op == Op::JumpDest {
                    out.push_str(&format!("L{offset}:\n"));
                }
                match imm {
                    Some(w) => out.push_str(&format!("{} {}\n", op.mnemonic(), format_imm(w))),
                    None => out.push_str(&format!("{}\n", op.mnemonic())),
                }
            }
            Decoded::Data { bytes, .. } => {
                out.push_str(&format!("DATA {}\n", crate::hash::bytes_to_hex(bytes)));
            }
        }
    }
    out
}
