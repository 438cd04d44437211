//! The gas-metered stack interpreter and its supporting types.

pub mod frame;
pub mod gas;
pub mod interp;
pub mod journal;
pub mod outcome;

pub use frame::Frame;
pub use interp::{execute, execute_create, execute_message};
pub use journal::{Checkpoint, JournalEntry, JournaledState};
pub use outcome::{
    read_trace_jsonl, write_trace_jsonl, ExecOutcome, ExecStatus, FaultKind, TraceEvent,
    TraceFlags, TraceIoError,
};
