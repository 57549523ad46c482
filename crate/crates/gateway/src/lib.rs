//! Command-line tools and the live session service.
//!
//! * [`protocol`]: JSON frame types and transcript canonicalization.
//! * [`session`]: per-connection session logic, independent of transport.
//! * [`server`]: the WebSocket and static-asset server.
//! * [`cli`]: the `h4` command.

pub mod cli;
pub mod protocol;
pub mod server;
pub mod session;
