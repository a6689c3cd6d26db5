//! File formats, experiment drivers and the `oneway` command-line tool built
//! on `oneway-core`.
//!
//! Every subcommand writes a JSON report and a CSV table of plot data. Exit
//! codes: 0 success, 2 usage, 3 numerical failure, 4 I/O.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod plot;

pub use error::{AppError, FileError};
