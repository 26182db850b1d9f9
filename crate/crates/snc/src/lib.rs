//! Input files, reports and the `snc` command line on top of `snc-core`.

pub mod commands;
pub mod format;
pub mod oracle;
pub mod report;

pub use commands::{run_command, Outcome};
pub use format::{FormatError, SncFile};
