//! Instance files, generators, oracle verification and the `ntu` commands.

pub mod commands;
pub mod error;
pub mod format;
pub mod generate;
pub mod report;
pub mod verify;
