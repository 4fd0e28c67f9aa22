//! Command implementations and report rendering for the `hh2` binary.

pub mod checks;
pub mod commands;
pub mod report;
