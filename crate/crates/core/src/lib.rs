//! Four-key Huffman text entry.
//!
//! * [`codec`]: 4-ary minimum-redundancy code generation and code tables.
//! * [`engine`]: the interactive selection state machine and trial logs.
//! * [`metrics`]: entry speed, KSPC, efficiency and error rate.
//! * [`experiment`]: phrase sets, schedules, session storage and statistics.

pub mod codec;
pub mod config;
pub mod engine;
pub mod experiment;
pub mod metrics;
