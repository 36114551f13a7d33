//! File formats, reports and command implementations for the `rawlsian`
//! binary.

pub mod app;
pub mod assignment;
pub mod error;
pub mod problem;
pub mod report;

pub use app::{run, Artifact, Cli};
pub use error::{CliError, Result};
