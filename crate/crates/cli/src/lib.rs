//! Library side of the command-line tool: file formats, report structures
//! and the command implementations, kept callable so integration tests can
//! drive them without spawning processes.

pub mod commands;
pub mod error;
pub mod io;
pub mod plot;
pub mod report;

pub use error::{CliError, Result};
