//! Front-end plumbing for the `cycleprobe` binary: configuration files,
//! panel CSV ingestion, command implementations, and artifact emission.
//! Split out as a library so the pieces stay testable on their own.

pub mod config;
pub mod emit;
pub mod error;
pub mod panel_csv;
pub mod run;
